#include "softperc/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "softperc/errors.hpp"

namespace softperc {

namespace {

void check_finite_components(std::span<const double> values,
                             const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DomainError(std::string(what) + ": non-finite component at index " +
                        std::to_string(i));
    }
  }
}

void check_same_dimension(std::size_t beta_len, std::size_t x_len) {
  if (beta_len != x_len) {
    throw DimensionError("dimension mismatch: beta has length " +
                         std::to_string(beta_len) + ", x has length " +
                         std::to_string(x_len));
  }
}

}  // namespace

namespace detail {

double dot(std::span<const double> beta, std::span<const double> x) {
  // Fixed left-to-right accumulation; part of the determinism contract.
  double acc = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    acc += beta[i] * x[i];
  }
  return acc;
}

double posterior(std::span<const double> beta, std::span<const double> x,
                 double t) {
  return sigmoid_stable(t * dot(beta, x));
}

double log_likelihood(const Dataset& dataset, std::span<const double> beta) {
  double acc = 0.0;
  for (const LabeledSample& sample : dataset.samples()) {
    const double score = dot(beta, sample.x.components());
    acc += to_real(sample.y) * score - softplus_stable(score);
  }
  return acc;
}

void accumulate_gradient(const Dataset& dataset, std::span<const double> beta,
                         double t, std::span<double> out) {
  for (const LabeledSample& sample : dataset.samples()) {
    const auto x = sample.x.components();
    const double w = to_real(sample.y) - posterior(beta, x, t);
    for (std::size_t j = 0; j < out.size(); ++j) {
      out[j] += x[j] * w;
    }
  }
}

double inf_norm(std::span<const double> v) {
  double norm = 0.0;
  for (double value : v) {
    norm = std::max(norm, std::abs(value));
  }
  return norm;
}

}  // namespace detail

Label label_from_real(double value) {
  if (value == 0.0) return Label::negative;
  if (value == 1.0) return Label::positive;
  throw DomainError("label must be 0 or 1");
}

ExtendedVector::ExtendedVector(std::vector<double> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw DomainError("ExtendedVector: need at least the bias component");
  }
  check_finite_components(components_, "ExtendedVector");
}

ExtendedVector augment(std::span<const double> features) {
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i])) {
      throw DomainError("augment: non-finite feature at index " +
                        std::to_string(i));
    }
  }
  std::vector<double> components;
  components.reserve(features.size() + 1);
  components.push_back(1.0);
  components.insert(components.end(), features.begin(), features.end());
  return ExtendedVector(std::move(components));
}

WeightVector::WeightVector(std::vector<double> beta) : beta_(std::move(beta)) {
  if (beta_.empty()) {
    throw DomainError("WeightVector: need at least the intercept component");
  }
  check_finite_components(beta_, "WeightVector");
}

WeightVector WeightVector::zeros(std::size_t dimension) {
  return WeightVector(std::vector<double>(dimension, 0.0));
}

Steepness::Steepness(double t) : t_(t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("Steepness: t must be positive and finite, got " +
                      std::to_string(t));
  }
}

Dataset::Dataset(std::vector<LabeledSample> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw DomainError("Dataset: need at least one sample");
  }
  feature_count_ = samples_.front().x.size() - 1;
  for (const LabeledSample& sample : samples_) {
    if (sample.x.size() != feature_count_ + 1) {
      throw DimensionError(
          "Dataset: sample vectors disagree on length: expected " +
          std::to_string(feature_count_ + 1) + ", got " +
          std::to_string(sample.x.size()));
    }
    if (sample.y == Label::positive) ++positives_;
  }
}

double dot(const WeightVector& beta, const ExtendedVector& x) {
  check_same_dimension(beta.size(), x.size());
  return detail::dot(beta.components(), x.components());
}

double sigmoid_stable(double z) {
  if (std::isnan(z)) {
    throw DomainError("sigmoid_stable: NaN input");
  }
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus_stable(double z) {
  if (std::isnan(z)) {
    throw DomainError("softplus_stable: NaN input");
  }
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double posterior(const ExtendedVector& x, const WeightVector& beta,
                 Steepness t) {
  check_same_dimension(beta.size(), x.size());
  return detail::posterior(beta.components(), x.components(), t.value());
}

double negative_posterior(const ExtendedVector& x, const WeightVector& beta,
                          Steepness t) {
  check_same_dimension(beta.size(), x.size());
  const double score = detail::dot(beta.components(), x.components());
  return sigmoid_stable(-(t.value() * score));
}

double likelihood(const Dataset& dataset, const WeightVector& beta,
                  std::size_t max_samples) {
  if (dataset.size() > max_samples) {
    throw DomainError("likelihood: dataset of N=" +
                      std::to_string(dataset.size()) + " exceeds the cap of " +
                      std::to_string(max_samples) +
                      "; the raw product underflows, use log_likelihood");
  }
  check_same_dimension(beta.size(), dataset.feature_count() + 1);
  double product = 1.0;
  for (const LabeledSample& sample : dataset.samples()) {
    const double p = sample.y == Label::positive
                         ? posterior(sample.x, beta)
                         : negative_posterior(sample.x, beta);
    product *= p;
  }
  return product;
}

double log_likelihood(const Dataset& dataset, const WeightVector& beta) {
  check_same_dimension(beta.size(), dataset.feature_count() + 1);
  return detail::log_likelihood(dataset, beta.components());
}

std::vector<double> gradient(const Dataset& dataset, const WeightVector& beta,
                             Steepness t) {
  check_same_dimension(beta.size(), dataset.feature_count() + 1);
  std::vector<double> result(beta.size(), 0.0);
  detail::accumulate_gradient(dataset, beta.components(), t.value(), result);
  return result;
}

std::vector<double> per_sample_gradient(const LabeledSample& sample,
                                        const WeightVector& beta,
                                        Steepness t) {
  check_same_dimension(beta.size(), sample.x.size());
  const auto x = sample.x.components();
  const double w =
      to_real(sample.y) - detail::posterior(beta.components(), x, t.value());
  std::vector<double> result(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    result[j] = x[j] * w;
  }
  return result;
}

}  // namespace softperc
