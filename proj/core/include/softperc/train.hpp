#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "softperc/model.hpp"

namespace softperc {

enum class TrainMode {
  batch_logistic,
  online_logistic,
  tempered_online,
  perceptron,
};

enum class StopReason {
  tolerance_met,
  max_epochs,
  zero_mistakes,
  max_updates,
};

const char* to_string(TrainMode mode);
const char* to_string(StopReason reason);
std::optional<TrainMode> train_mode_from_string(std::string_view name);

struct TrainConfig {
  TrainMode mode = TrainMode::batch_logistic;
  /// Empty means automatic: safe_step_size for batch, safe_step_size / N for
  /// the online modes.
  std::optional<double> learning_rate{};
  int max_epochs = 1000;
  /// Infinity-norm test on the full t=1 gradient.
  double gradient_tolerance = 1e-8;
  /// Used by tempered_online only; the other modes train at t = 1.
  Steepness steepness{};
  /// Empty means samples are visited in dataset order every epoch.
  std::optional<std::uint64_t> shuffle_seed{};
  /// Update cap for perceptron mode.
  std::uint64_t max_updates = 1'000'000;
};

struct TrainReport {
  int epochs_run = 0;
  std::uint64_t updates_applied = 0;
  double final_log_likelihood = 0.0;
  /// One entry per epoch run, always evaluated at t = 1 so traces are
  /// comparable across modes.
  std::vector<double> log_likelihood_trace{};
  double final_gradient_inf_norm = 0.0;
  bool converged = false;
  StopReason stop_reason = StopReason::max_epochs;
};

struct TrainResult {
  WeightVector weights;
  TrainReport report;
};

/// 4 / sum of squared sample norms: the reciprocal of the Lipschitz bound on
/// the log-likelihood gradient. Batch ascent at this rate never decreases
/// the objective.
double safe_step_size(const Dataset& dataset);

/// Full-batch gradient ascent from beta = 0.
TrainResult batch_gradient_ascent(const Dataset& dataset,
                                  const TrainConfig& config);

/// Per-sample gradient ascent from beta = 0; handles both online_logistic
/// (t = 1) and tempered_online (t = config.steepness).
TrainResult online_gradient_ascent(const Dataset& dataset,
                                   const TrainConfig& config);

/// Classic perceptron learning from beta = 0: sweep until a mistake-free
/// pass or the update cap.
TrainResult perceptron_train(const Dataset& dataset, const TrainConfig& config);

/// Dispatches on config.mode.
TrainResult train(const Dataset& dataset, const TrainConfig& config);

/// Step-function prediction: 1 when beta^T x > 0, else 0. A score of exactly
/// zero predicts 0, so a positive sample on the boundary triggers an update.
Label hard_predict(const WeightVector& beta, const ExtendedVector& x);

struct PerceptronUpdate {
  WeightVector weights;
  bool applied;
};

/// One perceptron correction: adds x for a missed positive, subtracts x for
/// a missed negative, leaves beta alone otherwise.
PerceptronUpdate perceptron_update(const WeightVector& beta,
                                   const LabeledSample& sample);

/// One tempered per-sample ascent step: beta + eta * x * (y - sigmoid(t s)).
/// As t grows the correction weight approaches the hard residual, recovering
/// the perceptron rule away from the boundary.
WeightVector tempered_online_step(const WeightVector& beta,
                                  const LabeledSample& sample, double eta,
                                  Steepness t);

}  // namespace softperc
