#include "softperc/data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

#include "softperc/errors.hpp"
#include "softperc/rng.hpp"

namespace softperc {

namespace {

constexpr int kModelFormatVersion = 1;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  return out;
}

// Draws components uniform on [-1,1) until the vector has usable length,
// then scales it to unit norm.
std::vector<double> draw_unit_vector(Xoshiro256StarStar& rng,
                                     std::size_t dimension) {
  std::vector<double> v(dimension);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& component : v) {
      component = rng.next_symmetric();
      norm += component * component;
    }
    norm = std::sqrt(norm);
  } while (norm < 1e-3);
  for (double& component : v) {
    component /= norm;
  }
  return v;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buffer;
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

Dataset load_csv(std::istream& in) {
  std::vector<LabeledSample> samples;
  std::string line;
  std::size_t line_number = 0;
  std::size_t expected_fields = 0;
  bool saw_any_line = false;

  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view view = trim(line);
    if (view.empty()) {
      saw_any_line = saw_any_line || !line.empty();
      continue;
    }
    saw_any_line = true;
    const auto fields = split(view, ',');

    if (samples.empty() && expected_fields == 0) {
      // A non-numeric first field on the first row marks a header.
      double probe = 0.0;
      if (!parse_double(fields.front(), probe)) {
        continue;
      }
    }

    if (expected_fields == 0) {
      expected_fields = fields.size();
    } else if (fields.size() != expected_fields) {
      throw DataError("line " + std::to_string(line_number) + ": expected " +
                      std::to_string(expected_fields) + " fields, got " +
                      std::to_string(fields.size()));
    }

    std::vector<double> features(fields.size() - 1);
    for (std::size_t j = 0; j + 1 < fields.size(); ++j) {
      double value = 0.0;
      if (!parse_double(fields[j], value)) {
        throw DataError("line " + std::to_string(line_number) +
                        ": invalid number '" + std::string(fields[j]) + "'");
      }
      if (!std::isfinite(value)) {
        throw DataError("line " + std::to_string(line_number) +
                        ": non-finite feature '" + std::string(fields[j]) +
                        "'");
      }
      features[j] = value;
    }

    double label_value = 0.0;
    if (!parse_double(fields.back(), label_value) ||
        (label_value != 0.0 && label_value != 1.0)) {
      throw DataError("line " + std::to_string(line_number) +
                      ": label must be 0 or 1, got '" +
                      std::string(trim(fields.back())) + "'");
    }

    samples.push_back(
        LabeledSample{augment(features), label_from_real(label_value)});
  }

  if (!saw_any_line) {
    throw DataError("empty file");
  }
  if (samples.empty()) {
    throw DataError("no data rows");
  }
  return Dataset(std::move(samples));
}

Dataset load_csv_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return load_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  for (std::size_t j = 1; j <= dataset.feature_count(); ++j) {
    out << 'x' << j << ',';
  }
  out << "y\n";
  for (const LabeledSample& sample : dataset.samples()) {
    const auto x = sample.x.components();
    for (std::size_t j = 1; j < x.size(); ++j) {
      out << format_double(x[j]) << ',';
    }
    out << to_int(sample.y) << '\n';
  }
}

void write_csv_file(const Dataset& dataset,
                    const std::filesystem::path& path) {
  auto out = open_output(path);
  write_csv(dataset, out);
  if (!out) {
    throw DataError("failed while writing " + path.string());
  }
}

void save_model(const ModelFile& model, std::ostream& out) {
  if (model.format_version != kModelFormatVersion) {
    throw DomainError("save_model: unsupported format_version " +
                      std::to_string(model.format_version));
  }
  if (model.beta.size() != model.n + 1) {
    throw DomainError("save_model: beta has " +
                      std::to_string(model.beta.size()) +
                      " components but n=" + std::to_string(model.n));
  }
  if (!(model.steepness > 0.0) || !std::isfinite(model.steepness)) {
    throw DomainError("save_model: steepness must be positive");
  }
  for (double b : model.beta) {
    if (!std::isfinite(b)) {
      throw DomainError("save_model: non-finite weight");
    }
  }
  out << "format_version=" << model.format_version << '\n'
      << "mode=" << to_string(model.trained_mode) << '\n'
      << "steepness=" << format_double(model.steepness) << '\n'
      << "n=" << model.n << '\n'
      << "beta=";
  for (std::size_t j = 0; j < model.beta.size(); ++j) {
    if (j > 0) out << ',';
    out << format_double(model.beta[j]);
  }
  out << '\n';
}

void save_model_file(const ModelFile& model,
                     const std::filesystem::path& path) {
  auto out = open_output(path);
  save_model(model, out);
  if (!out) {
    throw DataError("failed while writing " + path.string());
  }
}

ModelFile load_model(std::istream& in) {
  std::map<std::string, std::string, std::less<>> fields;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const std::size_t eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("model line " + std::to_string(line_number) +
                      ": expected key=value");
    }
    const auto key = std::string(trim(view.substr(0, eq)));
    if (!fields.emplace(key, std::string(view.substr(eq + 1))).second) {
      throw DataError("model: duplicate field '" + key + "'");
    }
  }

  for (const char* required :
       {"format_version", "mode", "steepness", "n", "beta"}) {
    if (!fields.contains(required)) {
      throw DataError("model: missing field '" + std::string(required) + "'");
    }
  }
  for (const auto& [key, value] : fields) {
    if (key != "format_version" && key != "mode" && key != "steepness" &&
        key != "n" && key != "beta") {
      throw DataError("model: unknown field '" + key + "'");
    }
  }

  ModelFile model;
  double version = 0.0;
  if (!parse_double(fields["format_version"], version) ||
      version != static_cast<double>(kModelFormatVersion)) {
    throw DataError("model: unsupported format_version '" +
                    fields["format_version"] + "'");
  }
  model.format_version = kModelFormatVersion;

  const auto mode = train_mode_from_string(trim(fields["mode"]));
  if (!mode) {
    throw DataError("model: unknown mode '" + fields["mode"] + "'");
  }
  model.trained_mode = *mode;

  if (!parse_double(fields["steepness"], model.steepness) ||
      !(model.steepness > 0.0) || !std::isfinite(model.steepness)) {
    throw DataError("model: invalid steepness '" + fields["steepness"] + "'");
  }

  double n_value = 0.0;
  if (!parse_double(fields["n"], n_value) || n_value < 0.0 ||
      n_value != std::floor(n_value)) {
    throw DataError("model: invalid n '" + fields["n"] + "'");
  }
  model.n = static_cast<std::size_t>(n_value);

  for (const std::string_view token : split(fields["beta"], ',')) {
    double value = 0.0;
    if (!parse_double(token, value) || !std::isfinite(value)) {
      throw DataError("model: invalid weight '" + std::string(token) + "'");
    }
    model.beta.push_back(value);
  }
  if (model.beta.size() != model.n + 1) {
    throw DataError("model corrupted: beta has " +
                    std::to_string(model.beta.size()) +
                    " components but n=" + std::to_string(model.n));
  }
  return model;
}

ModelFile load_model_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return load_model(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

SeparableData generate_separable(const SynthSpec& spec) {
  if (spec.kind != SynthKind::separable) {
    throw DomainError("generate_separable: spec.kind is not separable");
  }
  if (spec.n_features < 1) {
    throw DomainError("generate_separable: n_features must be at least 1");
  }
  if (spec.n_samples < 1) {
    throw DomainError("generate_separable: n_samples must be at least 1");
  }
  if (!(spec.margin > 0.0) || !std::isfinite(spec.margin)) {
    throw DomainError("generate_separable: margin must be positive");
  }

  Xoshiro256StarStar rng(spec.seed);
  std::vector<double> separator = draw_unit_vector(rng, spec.n_features + 1);

  constexpr std::size_t kMaxDraws = 1'000'000;
  std::size_t draws = 0;
  std::vector<LabeledSample> samples;
  samples.reserve(spec.n_samples);
  std::vector<double> features(spec.n_features);
  double achieved = std::numeric_limits<double>::infinity();

  while (samples.size() < spec.n_samples) {
    if (++draws > kMaxDraws) {
      throw DomainError(
          "generate_separable: infeasible spec, margin " +
          format_double(spec.margin) + " rejected " +
          std::to_string(kMaxDraws) + " draws from the unit cube");
    }
    for (double& f : features) {
      f = rng.next_symmetric();
    }
    ExtendedVector x = augment(features);
    const double score = detail::dot(separator, x.components());
    if (std::abs(score) < spec.margin) {
      continue;
    }
    achieved = std::min(achieved, std::abs(score));
    samples.push_back(LabeledSample{
        std::move(x), score > 0.0 ? Label::positive : Label::negative});
  }

  return SeparableData{Dataset(std::move(samples)),
                       WeightVector(std::move(separator)), achieved};
}

Dataset generate_overlapping(const SynthSpec& spec) {
  if (spec.kind != SynthKind::overlapping) {
    throw DomainError("generate_overlapping: spec.kind is not overlapping");
  }
  if (spec.n_features < 1) {
    throw DomainError("generate_overlapping: n_features must be at least 1");
  }
  if (spec.n_samples < 1) {
    throw DomainError("generate_overlapping: n_samples must be at least 1");
  }

  Xoshiro256StarStar rng(spec.seed);
  std::vector<double> direction = draw_unit_vector(rng, spec.n_features);

  std::vector<LabeledSample> samples;
  samples.reserve(spec.n_samples);
  std::vector<double> features(spec.n_features);
  // Per sample the generator draws, in order: the n feature components, the
  // target score, and the label coin.
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    double current = 0.0;
    for (std::size_t j = 0; j < features.size(); ++j) {
      features[j] = rng.next_symmetric();
      current += direction[j] * features[j];
    }
    const double score = 6.0 * rng.next_unit() - 3.0;
    const double shift = score - current;
    for (std::size_t j = 0; j < features.size(); ++j) {
      features[j] += shift * direction[j];
    }
    const Label y = rng.next_unit() < sigmoid_stable(score)
                        ? Label::positive
                        : Label::negative;
    samples.push_back(LabeledSample{augment(features), y});
  }
  return Dataset(std::move(samples));
}

Metrics evaluate(const Dataset& dataset, const WeightVector& beta) {
  if (beta.size() != dataset.feature_count() + 1) {
    throw DimensionError("dimension mismatch: beta has length " +
                         std::to_string(beta.size()) + ", dataset needs " +
                         std::to_string(dataset.feature_count() + 1));
  }
  Metrics metrics;
  for (const LabeledSample& sample : dataset.samples()) {
    const bool predicted_positive =
        detail::dot(beta.components(), sample.x.components()) > 0.0;
    if (sample.y == Label::positive) {
      predicted_positive ? ++metrics.true_positives : ++metrics.false_negatives;
    } else {
      predicted_positive ? ++metrics.false_positives : ++metrics.true_negatives;
    }
  }
  metrics.accuracy =
      static_cast<double>(metrics.true_positives + metrics.true_negatives) /
      static_cast<double>(dataset.size());
  metrics.log_likelihood = log_likelihood(dataset, beta);
  return metrics;
}

}  // namespace softperc
