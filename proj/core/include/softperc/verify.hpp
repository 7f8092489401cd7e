#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "softperc/model.hpp"

namespace softperc {

struct GradientCheckReport {
  double max_relative_error = 0.0;
  std::size_t worst_component = 0;
  std::vector<double> analytic{};
  std::vector<double> numeric{};
  double h = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct MonotonicityReport {
  bool passed = true;
  int steps_run = 0;
  /// 1-based index of the first step whose log-likelihood dropped by more
  /// than the slack; empty when the trace never decreased.
  std::optional<int> first_violating_step{};
  double largest_decrease = 0.0;
  double final_log_likelihood = 0.0;
};

struct LimitCheckReport {
  std::uint64_t samples_compared = 0;
  std::uint64_t samples_skipped_near_boundary = 0;
  double max_component_discrepancy = 0.0;
  /// max |x_j| * sigmoid(-t * boundary_eps) + 1e-9; the discrepancy a
  /// correct implementation can show on off-boundary visits.
  double pass_threshold = 0.0;
  bool passed = false;
};

/// Central finite differences of log_likelihood, component by component.
/// Shares no code with the analytic gradient beyond log_likelihood itself.
std::vector<double> finite_diff_gradient(const Dataset& dataset,
                                         const WeightVector& beta, double h);

/// Compares two gradient vectors; relative error per component uses the
/// denominator max(|analytic|, |numeric|, 1e-12).
GradientCheckReport compare_gradients(const std::vector<double>& analytic,
                                      const std::vector<double>& numeric,
                                      double h, double tol);

/// Checks the analytic gradient against finite differences at one point.
GradientCheckReport gradient_check(const Dataset& dataset,
                                   const WeightVector& beta, double h,
                                   double tol);

/// Runs batch gradient ascent from beta = 0 and verifies the objective never
/// drops by more than 1e-12 between consecutive steps. The rate defaults to
/// safe_step_size(dataset).
MonotonicityReport ascent_monotonicity_check(
    const Dataset& dataset, int steps,
    std::optional<double> learning_rate = {});

/// Walks the perceptron trajectory for the given number of sweeps and, at
/// every visit, compares the perceptron correction with the tempered update
/// (eta = 1, steepness t) computed from the same weights. Visits with
/// |score| < boundary_eps are skipped: the sigmoid is genuinely soft there
/// at any finite t. Requires t > 1.
LimitCheckReport perceptron_limit_check(const Dataset& dataset, int sweeps,
                                        Steepness t, double boundary_eps);

std::string to_key_values(const GradientCheckReport& report);
std::string summary(const GradientCheckReport& report);
std::string to_key_values(const LimitCheckReport& report);
std::string summary(const LimitCheckReport& report);

}  // namespace softperc
