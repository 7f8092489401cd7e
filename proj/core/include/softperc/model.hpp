#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace softperc {

/// Binary class label; 1 is the positive class.
enum class Label : std::uint8_t { negative = 0, positive = 1 };

constexpr double to_real(Label y) {
  return y == Label::positive ? 1.0 : 0.0;
}

constexpr int to_int(Label y) {
  return y == Label::positive ? 1 : 0;
}

/// Converts an exact 0.0 or 1.0 into a label; anything else is rejected.
Label label_from_real(double value);

/// Feature vector extended with the constant-1 bias component at index 0,
/// so the intercept folds into the scalar product.
class ExtendedVector {
 public:
  explicit ExtendedVector(std::vector<double> components);

  std::span<const double> components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  double operator[](std::size_t i) const { return components_[i]; }

 private:
  std::vector<double> components_;
};

/// Builds the extended vector [1, features...].
ExtendedVector augment(std::span<const double> features);

/// Parameter vector beta; component 0 is the intercept.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> beta);
  static WeightVector zeros(std::size_t dimension);

  std::span<const double> components() const { return beta_; }
  std::size_t size() const { return beta_.size(); }
  double operator[](std::size_t i) const { return beta_[i]; }

 private:
  std::vector<double> beta_;
};

/// Scale applied to the score before the sigmoid. t = 1 is the plain
/// logistic model; large t approaches a hard threshold.
class Steepness {
 public:
  Steepness() = default;
  explicit Steepness(double t);
  double value() const { return t_; }

 private:
  double t_ = 1.0;
};

struct LabeledSample {
  ExtendedVector x;
  Label y;
};

/// Immutable collection of labeled extended vectors. All samples share one
/// dimensionality; the dataset is never empty.
class Dataset {
 public:
  explicit Dataset(std::vector<LabeledSample> samples);

  const std::vector<LabeledSample>& samples() const { return samples_; }
  /// Feature count n, excluding the bias component.
  std::size_t feature_count() const { return feature_count_; }
  /// Total sample count N.
  std::size_t size() const { return samples_.size(); }
  /// Positive count N1.
  std::size_t positives() const { return positives_; }
  /// Negative count N2.
  std::size_t negatives() const { return samples_.size() - positives_; }

 private:
  std::vector<LabeledSample> samples_;
  std::size_t feature_count_ = 0;
  std::size_t positives_ = 0;
};

/// Scalar product beta^T x, accumulated left to right so results are
/// reproducible bit for bit.
double dot(const WeightVector& beta, const ExtendedVector& x);

/// exp(z)/(1+exp(z)) without overflow for any finite z: only the exp of a
/// non-positive argument is ever evaluated.
double sigmoid_stable(double z);

/// log(1+exp(z)) computed as max(z,0) + log1p(exp(-|z|)); never overflows.
double softplus_stable(double z);

/// Modeled probability that x is positive: sigmoid(t * beta^T x).
double posterior(const ExtendedVector& x, const WeightVector& beta,
                 Steepness t = {});

/// Complement probability, computed as the sigmoid of the negated score so
/// posterior + negative_posterior stays within rounding of 1.
double negative_posterior(const ExtendedVector& x, const WeightVector& beta,
                          Steepness t = {});

/// Raw likelihood: product over positives of p and negatives of (1-p).
/// Refuses datasets above `max_samples` (the raw product underflows);
/// use log_likelihood instead.
double likelihood(const Dataset& dataset, const WeightVector& beta,
                  std::size_t max_samples = 1000);

/// Log-likelihood: sum of y_i * beta^T x_i - softplus(beta^T x_i), summed in
/// dataset order. Always <= 0.
double log_likelihood(const Dataset& dataset, const WeightVector& beta);

/// Gradient of the (tempered) log-likelihood: sum of x_i * (y_i - p(x_i)),
/// accumulated in dataset order. With t = 1 this is exactly the gradient of
/// log_likelihood.
std::vector<double> gradient(const Dataset& dataset, const WeightVector& beta,
                             Steepness t = {});

/// Single-sample gradient term x * (y - p(x)).
std::vector<double> per_sample_gradient(const LabeledSample& sample,
                                        const WeightVector& beta,
                                        Steepness t = {});

namespace detail {
// Unvalidated span kernels shared by the trainers and checkers. All public
// operations funnel through these so every code path rounds identically.
double dot(std::span<const double> beta, std::span<const double> x);
double posterior(std::span<const double> beta, std::span<const double> x,
                 double t);
double log_likelihood(const Dataset& dataset, std::span<const double> beta);
void accumulate_gradient(const Dataset& dataset, std::span<const double> beta,
                         double t, std::span<double> out);
double inf_norm(std::span<const double> v);
}  // namespace detail

}  // namespace softperc
