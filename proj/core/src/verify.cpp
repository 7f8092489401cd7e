#include "softperc/verify.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "softperc/data.hpp"
#include "softperc/errors.hpp"
#include "softperc/train.hpp"

namespace softperc {

std::vector<double> finite_diff_gradient(const Dataset& dataset,
                                         const WeightVector& beta, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw DomainError("finite_diff_gradient: h must be positive");
  }
  if (beta.size() != dataset.feature_count() + 1) {
    throw DimensionError("dimension mismatch: beta has length " +
                         std::to_string(beta.size()) + ", dataset needs " +
                         std::to_string(dataset.feature_count() + 1));
  }
  std::vector<double> point(beta.components().begin(),
                            beta.components().end());
  std::vector<double> result(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) {
    const double original = point[j];
    point[j] = original + h;
    const double plus = detail::log_likelihood(dataset, point);
    point[j] = original - h;
    const double minus = detail::log_likelihood(dataset, point);
    point[j] = original;
    result[j] = (plus - minus) / (2.0 * h);
  }
  return result;
}

GradientCheckReport compare_gradients(const std::vector<double>& analytic,
                                      const std::vector<double>& numeric,
                                      double h, double tol) {
  if (analytic.size() != numeric.size()) {
    throw DimensionError("compare_gradients: vectors have lengths " +
                         std::to_string(analytic.size()) + " and " +
                         std::to_string(numeric.size()));
  }
  if (!(tol > 0.0)) {
    throw DomainError("compare_gradients: tol must be positive");
  }
  GradientCheckReport report;
  report.analytic = analytic;
  report.numeric = numeric;
  report.h = h;
  report.tolerance = tol;
  for (std::size_t j = 0; j < analytic.size(); ++j) {
    // Floor of 1e-12 keeps near-zero components from blowing up the ratio.
    const double denom =
        std::max({std::abs(analytic[j]), std::abs(numeric[j]), 1e-12});
    const double error = std::abs(analytic[j] - numeric[j]) / denom;
    if (error > report.max_relative_error) {
      report.max_relative_error = error;
      report.worst_component = j;
    }
  }
  report.passed = report.max_relative_error <= tol;
  return report;
}

GradientCheckReport gradient_check(const Dataset& dataset,
                                   const WeightVector& beta, double h,
                                   double tol) {
  return compare_gradients(gradient(dataset, beta),
                           finite_diff_gradient(dataset, beta, h), h, tol);
}

MonotonicityReport ascent_monotonicity_check(
    const Dataset& dataset, int steps, std::optional<double> learning_rate) {
  if (steps < 1) {
    throw DomainError("ascent_monotonicity_check: steps must be at least 1");
  }
  const double eta = learning_rate ? *learning_rate : safe_step_size(dataset);
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw DomainError("ascent_monotonicity_check: rate must be positive");
  }
  const std::size_t dim = dataset.feature_count() + 1;
  std::vector<double> beta(dim, 0.0);
  std::vector<double> g(dim);

  MonotonicityReport report;
  double previous = detail::log_likelihood(dataset, beta);
  for (int step = 1; step <= steps; ++step) {
    std::fill(g.begin(), g.end(), 0.0);
    detail::accumulate_gradient(dataset, beta, 1.0, g);
    for (std::size_t j = 0; j < dim; ++j) {
      beta[j] += eta * g[j];
    }
    const double current = detail::log_likelihood(dataset, beta);
    const double drop = previous - current;
    if (drop > report.largest_decrease) {
      report.largest_decrease = drop;
    }
    ++report.steps_run;
    if (drop > 1e-12) {
      report.passed = false;
      report.first_violating_step = step;
      report.final_log_likelihood = current;
      return report;
    }
    previous = current;
  }
  report.final_log_likelihood = previous;
  return report;
}

LimitCheckReport perceptron_limit_check(const Dataset& dataset, int sweeps,
                                        Steepness t, double boundary_eps) {
  if (sweeps < 1) {
    throw DomainError("perceptron_limit_check: sweeps must be at least 1");
  }
  if (t.value() <= 1.0) {
    throw DomainError(
        "perceptron_limit_check: vacuous for steepness <= 1; pick t large "
        "enough that the sigmoid approaches a step function");
  }
  if (!(boundary_eps > 0.0) || !std::isfinite(boundary_eps)) {
    throw DomainError("perceptron_limit_check: boundary_eps must be positive");
  }

  double max_component = 0.0;
  for (const LabeledSample& sample : dataset.samples()) {
    for (double v : sample.x.components()) {
      max_component = std::max(max_component, std::abs(v));
    }
  }

  LimitCheckReport report;
  report.pass_threshold =
      max_component * sigmoid_stable(-(t.value() * boundary_eps)) + 1e-9;

  // Walk the perceptron trajectory. At each visit both corrections are
  // computed from the same weights: the hard residual (y - yhat) and the
  // soft residual (y - sigmoid(t * score)). The paper's limit statement is
  // about these update maps agreeing away from the boundary, so the
  // comparison is pointwise along one trajectory; two free-running learners
  // would drift apart at every boundary tie and compare nothing meaningful.
  const std::size_t dim = dataset.feature_count() + 1;
  std::vector<double> beta(dim, 0.0);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (const LabeledSample& sample : dataset.samples()) {
      const auto x = sample.x.components();
      const double score = detail::dot(beta, x);
      const Label predicted = score > 0.0 ? Label::positive : Label::negative;
      const double hard_residual =
          predicted == sample.y ? 0.0 : to_real(sample.y) - to_real(predicted);
      const double soft_residual =
          to_real(sample.y) - sigmoid_stable(t.value() * score);

      if (std::abs(score) >= boundary_eps) {
        ++report.samples_compared;
        for (std::size_t j = 0; j < dim; ++j) {
          const double discrepancy =
              std::abs(x[j] * hard_residual - x[j] * soft_residual);
          if (discrepancy > report.max_component_discrepancy) {
            report.max_component_discrepancy = discrepancy;
          }
        }
      } else {
        ++report.samples_skipped_near_boundary;
      }

      if (hard_residual != 0.0) {
        for (std::size_t j = 0; j < dim; ++j) {
          beta[j] += hard_residual * x[j];
        }
      }
    }
  }
  report.passed = report.max_component_discrepancy <= report.pass_threshold;
  return report;
}

std::string to_key_values(const GradientCheckReport& report) {
  std::ostringstream out;
  out << "max_relative_error=" << format_double(report.max_relative_error)
      << '\n'
      << "worst_component=" << report.worst_component << '\n'
      << "analytic_at_worst=" << format_double(report.analytic.empty()
                                                   ? 0.0
                                                   : report.analytic[report.worst_component])
      << '\n'
      << "numeric_at_worst=" << format_double(report.numeric.empty()
                                                  ? 0.0
                                                  : report.numeric[report.worst_component])
      << '\n'
      << "h=" << format_double(report.h) << '\n'
      << "tol=" << format_double(report.tolerance) << '\n'
      << "passed=" << (report.passed ? "true" : "false") << '\n';
  return out.str();
}

std::string summary(const GradientCheckReport& report) {
  std::ostringstream out;
  out << (report.passed ? "gradient check passed" : "gradient check FAILED")
      << ": max relative error " << format_double(report.max_relative_error)
      << " at component " << report.worst_component << " (tol "
      << format_double(report.tolerance) << ", h " << format_double(report.h)
      << ")";
  return out.str();
}

std::string to_key_values(const LimitCheckReport& report) {
  std::ostringstream out;
  out << "samples_compared=" << report.samples_compared << '\n'
      << "samples_skipped_near_boundary="
      << report.samples_skipped_near_boundary << '\n'
      << "max_component_discrepancy="
      << format_double(report.max_component_discrepancy) << '\n'
      << "pass_threshold=" << format_double(report.pass_threshold) << '\n'
      << "passed=" << (report.passed ? "true" : "false") << '\n';
  return out.str();
}

std::string summary(const LimitCheckReport& report) {
  std::ostringstream out;
  out << (report.passed ? "limit check passed" : "limit check FAILED") << ": "
      << report.samples_compared << " visits compared, "
      << report.samples_skipped_near_boundary
      << " skipped near the boundary, max discrepancy "
      << format_double(report.max_component_discrepancy) << " (threshold "
      << format_double(report.pass_threshold) << ")";
  return out.str();
}

}  // namespace softperc
