#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "softperc/model.hpp"
#include "softperc/train.hpp"

namespace softperc {

/// Persisted model: weights plus the metadata needed to apply them.
struct ModelFile {
  std::vector<double> beta{};
  std::size_t n = 0;
  TrainMode trained_mode = TrainMode::batch_logistic;
  double steepness = 1.0;
  int format_version = 1;
};

struct Metrics {
  double accuracy = 0.0;
  double log_likelihood = 0.0;
  std::uint64_t true_positives = 0;
  std::uint64_t false_positives = 0;
  std::uint64_t true_negatives = 0;
  std::uint64_t false_negatives = 0;
};

enum class SynthKind { separable, overlapping };

struct SynthSpec {
  std::size_t n_features = 2;
  std::size_t n_samples = 100;
  /// Minimum |separator score| kept by the separable generator; must be
  /// positive for SynthKind::separable.
  double margin = 0.1;
  std::uint64_t seed = 1;
  SynthKind kind = SynthKind::separable;
};

struct SeparableData {
  Dataset dataset;
  WeightVector planted_separator;
  double achieved_margin = 0.0;
};

/// Parses a dataset CSV: n feature columns then one 0/1 label column, with
/// an optional header row detected by a non-numeric first field. Features
/// are augmented with the bias component; row order is preserved.
Dataset load_csv(std::istream& in);
Dataset load_csv_file(const std::filesystem::path& path);

/// Writes the CSV form read back by load_csv. The bias component never
/// appears in files; numbers use shortest round-trip decimal text.
void write_csv(const Dataset& dataset, std::ostream& out);
void write_csv_file(const Dataset& dataset, const std::filesystem::path& path);

void save_model(const ModelFile& model, std::ostream& out);
void save_model_file(const ModelFile& model, const std::filesystem::path& path);
ModelFile load_model(std::istream& in);
ModelFile load_model_file(const std::filesystem::path& path);

/// Draws a unit-norm separator, samples features from the cube [-1,1]^n,
/// rejects points scoring within `margin` of the boundary, and labels by the
/// score sign. Deterministic given the seed.
SeparableData generate_separable(const SynthSpec& spec);

/// Draws target scores uniform on [-3,3), places each feature point so a
/// unit Bayes direction reproduces its score exactly, and labels
/// stochastically with probability sigmoid(score). Deterministic given the
/// seed.
Dataset generate_overlapping(const SynthSpec& spec);

/// Hard-threshold confusion counts, accuracy, and the t=1 log-likelihood.
Metrics evaluate(const Dataset& dataset, const WeightVector& beta);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace softperc
