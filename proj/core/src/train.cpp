#include "softperc/train.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "softperc/errors.hpp"
#include "softperc/rng.hpp"

namespace softperc {

namespace {

void validate_config(const TrainConfig& config) {
  if (config.learning_rate) {
    const double eta = *config.learning_rate;
    if (!(eta > 0.0) || !std::isfinite(eta)) {
      throw DomainError("TrainConfig: learning_rate must be positive, got " +
                        std::to_string(eta));
    }
  }
  if (config.max_epochs < 1) {
    throw DomainError("TrainConfig: max_epochs must be at least 1");
  }
  if (!(config.gradient_tolerance >= 0.0) ||
      !std::isfinite(config.gradient_tolerance)) {
    throw DomainError("TrainConfig: gradient_tolerance must be non-negative");
  }
  if (config.max_updates < 1) {
    throw DomainError("TrainConfig: max_updates must be at least 1");
  }
}

void require_mode(const TrainConfig& config, TrainMode expected,
                  const char* trainer) {
  if (config.mode != expected) {
    throw DomainError(std::string(trainer) + ": config.mode is " +
                      to_string(config.mode));
  }
}

double resolve_rate(const Dataset& dataset, const TrainConfig& config,
                    bool per_sample) {
  if (config.learning_rate) return *config.learning_rate;
  const double eta = safe_step_size(dataset);
  // Online steps see one term of the gradient sum, so the automatic rate is
  // scaled down by N.
  return per_sample ? eta / static_cast<double>(dataset.size()) : eta;
}

// One per-sample ascent step in place. per_sample_gradient, the online
// trainers, and tempered_online_step all round exactly like this.
void apply_sample_step(std::span<double> beta, const LabeledSample& sample,
                       double eta, double t) {
  const auto x = sample.x.components();
  const double w = to_real(sample.y) - detail::posterior(beta, x, t);
  for (std::size_t j = 0; j < beta.size(); ++j) {
    beta[j] += eta * (x[j] * w);
  }
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

// Fisher-Yates with the portable generator; std::shuffle is
// implementation-defined and would break cross-platform reproducibility.
void shuffle_order(std::vector<std::size_t>& order, Xoshiro256StarStar& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(order[i - 1], order[j]);
  }
}

void finish_report(const Dataset& dataset, std::span<const double> beta,
                   TrainReport& report, bool norm_pending) {
  if (norm_pending) {
    std::vector<double> g(beta.size(), 0.0);
    detail::accumulate_gradient(dataset, beta, 1.0, g);
    report.final_gradient_inf_norm = detail::inf_norm(g);
  }
  report.final_log_likelihood = detail::log_likelihood(dataset, beta);
}

}  // namespace

const char* to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::batch_logistic: return "batch";
    case TrainMode::online_logistic: return "online";
    case TrainMode::tempered_online: return "tempered";
    case TrainMode::perceptron: return "perceptron";
  }
  return "unknown";
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::tolerance_met: return "tolerance_met";
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::zero_mistakes: return "zero_mistakes";
    case StopReason::max_updates: return "max_updates";
  }
  return "unknown";
}

std::optional<TrainMode> train_mode_from_string(std::string_view name) {
  if (name == "batch") return TrainMode::batch_logistic;
  if (name == "online") return TrainMode::online_logistic;
  if (name == "tempered") return TrainMode::tempered_online;
  if (name == "perceptron") return TrainMode::perceptron;
  return std::nullopt;
}

double safe_step_size(const Dataset& dataset) {
  double sum_sq = 0.0;
  for (const LabeledSample& sample : dataset.samples()) {
    for (double v : sample.x.components()) {
      sum_sq += v * v;
    }
  }
  if (sum_sq == 0.0) {
    throw DomainError("safe_step_size: all sample vectors are zero");
  }
  // The gradient of the log-likelihood is Lipschitz with constant at most
  // (1/4) sum ||x_i||^2; the reciprocal guarantees ascent.
  return 4.0 / sum_sq;
}

TrainResult batch_gradient_ascent(const Dataset& dataset,
                                  const TrainConfig& config) {
  require_mode(config, TrainMode::batch_logistic, "batch_gradient_ascent");
  validate_config(config);
  const double eta = resolve_rate(dataset, config, false);
  const std::size_t dim = dataset.feature_count() + 1;

  std::vector<double> beta(dim, 0.0);
  std::vector<double> g(dim);
  TrainReport report;
  bool stopped = false;
  while (report.epochs_run < config.max_epochs) {
    std::fill(g.begin(), g.end(), 0.0);
    detail::accumulate_gradient(dataset, beta, 1.0, g);
    const double norm = detail::inf_norm(g);
    if (norm <= config.gradient_tolerance) {
      report.converged = true;
      report.stop_reason = StopReason::tolerance_met;
      report.final_gradient_inf_norm = norm;
      stopped = true;
      break;
    }
    for (std::size_t j = 0; j < dim; ++j) {
      beta[j] += eta * g[j];
    }
    ++report.epochs_run;
    ++report.updates_applied;
    report.log_likelihood_trace.push_back(
        detail::log_likelihood(dataset, beta));
  }
  if (!stopped) {
    report.stop_reason = StopReason::max_epochs;
  }
  finish_report(dataset, beta, report, !stopped);
  return TrainResult{WeightVector(std::move(beta)), std::move(report)};
}

TrainResult online_gradient_ascent(const Dataset& dataset,
                                   const TrainConfig& config) {
  if (config.mode != TrainMode::online_logistic &&
      config.mode != TrainMode::tempered_online) {
    throw DomainError(std::string("online_gradient_ascent: config.mode is ") +
                      to_string(config.mode));
  }
  validate_config(config);
  const double eta = resolve_rate(dataset, config, true);
  const double t = config.mode == TrainMode::tempered_online
                       ? config.steepness.value()
                       : 1.0;
  const std::size_t dim = dataset.feature_count() + 1;

  std::vector<double> beta(dim, 0.0);
  std::vector<double> g(dim);
  auto order = identity_order(dataset.size());
  std::optional<Xoshiro256StarStar> rng;
  if (config.shuffle_seed) rng.emplace(*config.shuffle_seed);

  TrainReport report;
  bool stopped = false;
  while (report.epochs_run < config.max_epochs) {
    std::fill(g.begin(), g.end(), 0.0);
    detail::accumulate_gradient(dataset, beta, 1.0, g);
    const double norm = detail::inf_norm(g);
    if (norm <= config.gradient_tolerance) {
      report.converged = true;
      report.stop_reason = StopReason::tolerance_met;
      report.final_gradient_inf_norm = norm;
      stopped = true;
      break;
    }
    if (rng) shuffle_order(order, *rng);
    for (std::size_t index : order) {
      apply_sample_step(beta, dataset.samples()[index], eta, t);
      ++report.updates_applied;
    }
    ++report.epochs_run;
    report.log_likelihood_trace.push_back(
        detail::log_likelihood(dataset, beta));
  }
  if (!stopped) {
    report.stop_reason = StopReason::max_epochs;
  }
  finish_report(dataset, beta, report, !stopped);
  return TrainResult{WeightVector(std::move(beta)), std::move(report)};
}

TrainResult perceptron_train(const Dataset& dataset,
                             const TrainConfig& config) {
  require_mode(config, TrainMode::perceptron, "perceptron_train");
  validate_config(config);
  const std::size_t dim = dataset.feature_count() + 1;

  std::vector<double> beta(dim, 0.0);
  auto order = identity_order(dataset.size());
  std::optional<Xoshiro256StarStar> rng;
  if (config.shuffle_seed) rng.emplace(*config.shuffle_seed);

  TrainReport report;
  for (;;) {
    if (rng) shuffle_order(order, *rng);
    std::uint64_t sweep_updates = 0;
    bool capped = false;
    for (std::size_t index : order) {
      const LabeledSample& sample = dataset.samples()[index];
      const auto x = sample.x.components();
      const double score = detail::dot(beta, x);
      const Label predicted = score > 0.0 ? Label::positive : Label::negative;
      if (predicted != sample.y) {
        const double residual = to_real(sample.y) - to_real(predicted);
        for (std::size_t j = 0; j < dim; ++j) {
          beta[j] += residual * x[j];
        }
        ++sweep_updates;
        ++report.updates_applied;
        if (report.updates_applied >= config.max_updates) {
          capped = true;
          break;
        }
      }
    }
    ++report.epochs_run;
    report.log_likelihood_trace.push_back(
        detail::log_likelihood(dataset, beta));
    if (capped) {
      report.stop_reason = StopReason::max_updates;
      break;
    }
    if (sweep_updates == 0) {
      report.converged = true;
      report.stop_reason = StopReason::zero_mistakes;
      break;
    }
  }
  finish_report(dataset, beta, report, true);
  return TrainResult{WeightVector(std::move(beta)), std::move(report)};
}

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
  switch (config.mode) {
    case TrainMode::batch_logistic:
      return batch_gradient_ascent(dataset, config);
    case TrainMode::online_logistic:
    case TrainMode::tempered_online:
      return online_gradient_ascent(dataset, config);
    case TrainMode::perceptron:
      return perceptron_train(dataset, config);
  }
  throw DomainError("train: unknown mode");
}

Label hard_predict(const WeightVector& beta, const ExtendedVector& x) {
  return dot(beta, x) > 0.0 ? Label::positive : Label::negative;
}

PerceptronUpdate perceptron_update(const WeightVector& beta,
                                   const LabeledSample& sample) {
  const Label predicted = hard_predict(beta, sample.x);
  if (predicted == sample.y) {
    return PerceptronUpdate{beta, false};
  }
  const double residual = to_real(sample.y) - to_real(predicted);
  const auto x = sample.x.components();
  std::vector<double> next(beta.components().begin(), beta.components().end());
  for (std::size_t j = 0; j < next.size(); ++j) {
    next[j] += residual * x[j];
  }
  return PerceptronUpdate{WeightVector(std::move(next)), true};
}

WeightVector tempered_online_step(const WeightVector& beta,
                                  const LabeledSample& sample, double eta,
                                  Steepness t) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("tempered_online_step: eta must be positive");
  }
  if (beta.size() != sample.x.size()) {
    throw DimensionError("dimension mismatch: beta has length " +
                         std::to_string(beta.size()) + ", x has length " +
                         std::to_string(sample.x.size()));
  }
  std::vector<double> next(beta.components().begin(), beta.components().end());
  apply_sample_step(next, sample, eta, t.value());
  return WeightVector(std::move(next));
}

}  // namespace softperc
