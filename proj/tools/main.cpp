// softperc command-line tool: synthesize datasets, train binary linear
// classifiers, evaluate them, and run the numerical checks.
//
// Exit codes: 0 success, 1 usage/validation error, 2 data error,
// 3 failed check.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "softperc/data.hpp"
#include "softperc/errors.hpp"
#include "softperc/model.hpp"
#include "softperc/rng.hpp"
#include "softperc/train.hpp"
#include "softperc/verify.hpp"

namespace {

using softperc::format_double;

// Flag/value problems found after CLI11 parsing; maps to exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SynthOptions {
  std::string kind;
  std::size_t features = 2;
  std::size_t samples = 100;
  double margin = 0.1;
  std::uint64_t seed = 1;
  std::string out;
};

struct TrainOptions {
  std::string data;
  std::string out;
  std::string mode;
  std::string learning_rate = "auto";
  int epochs = 1000;
  double tolerance = 1e-8;
  double steepness = 1.0;
  bool steepness_given = false;
  std::int64_t shuffle_seed = -1;
  bool shuffle_seed_given = false;
  std::uint64_t max_updates = 1'000'000;
};

struct EvalOptions {
  std::string model;
  std::string data;
};

struct GradcheckOptions {
  std::string data;
  double h = 1e-5;
  double tol = 1e-6;
  int trials = 20;
  std::uint64_t seed = 1;
};

struct SweepOptions {
  std::string data;
  std::string steepness_list;
  int sweeps = 5;
  double boundary_eps = 1e-3;
};

std::string join_doubles(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find(',', start);
    const std::string token =
        text.substr(start, pos == std::string::npos ? pos : pos - start);
    try {
      std::size_t used = 0;
      const double value = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      values.push_back(value);
    } catch (const std::exception&) {
      throw UsageError("invalid number '" + token + "' in list");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return values;
}

int run_synth(const SynthOptions& opts) {
  softperc::SynthSpec spec;
  spec.n_features = opts.features;
  spec.n_samples = opts.samples;
  spec.margin = opts.margin;
  spec.seed = opts.seed;

  if (opts.kind == "separable") {
    spec.kind = softperc::SynthKind::separable;
    if (!(spec.margin > 0.0)) {
      throw UsageError("--margin must be positive for --kind separable");
    }
    auto generated = softperc::generate_separable(spec);
    softperc::write_csv_file(generated.dataset, opts.out);
    std::cout << "kind=separable\n"
              << "features=" << spec.n_features << '\n'
              << "samples=" << generated.dataset.size() << '\n'
              << "positives=" << generated.dataset.positives() << '\n'
              << "negatives=" << generated.dataset.negatives() << '\n'
              << "seed=" << spec.seed << '\n'
              << "requested_margin=" << format_double(spec.margin) << '\n'
              << "achieved_margin=" << format_double(generated.achieved_margin)
              << '\n'
              << "separator="
              << join_doubles(generated.planted_separator.components()) << '\n'
              << "file=" << opts.out << '\n';
  } else if (opts.kind == "overlapping") {
    spec.kind = softperc::SynthKind::overlapping;
    auto dataset = softperc::generate_overlapping(spec);
    softperc::write_csv_file(dataset, opts.out);
    std::cout << "kind=overlapping\n"
              << "features=" << spec.n_features << '\n'
              << "samples=" << dataset.size() << '\n'
              << "positives=" << dataset.positives() << '\n'
              << "negatives=" << dataset.negatives() << '\n'
              << "seed=" << spec.seed << '\n'
              << "file=" << opts.out << '\n';
  } else {
    throw UsageError("--kind must be separable or overlapping");
  }
  return 0;
}

int run_train(const TrainOptions& opts) {
  softperc::TrainConfig config;
  const auto mode = softperc::train_mode_from_string(opts.mode);
  if (!mode) {
    throw UsageError("--mode must be batch, online, tempered, or perceptron");
  }
  config.mode = *mode;

  if (opts.learning_rate != "auto") {
    try {
      std::size_t used = 0;
      const double rate = std::stod(opts.learning_rate, &used);
      if (used != opts.learning_rate.size() || !(rate > 0.0)) {
        throw std::invalid_argument(opts.learning_rate);
      }
      config.learning_rate = rate;
    } catch (const std::exception&) {
      throw UsageError("--lr must be 'auto' or a positive number");
    }
  }
  if (opts.epochs < 1) throw UsageError("--epochs must be at least 1");
  config.max_epochs = opts.epochs;
  if (!(opts.tolerance >= 0.0)) throw UsageError("--tol must be non-negative");
  config.gradient_tolerance = opts.tolerance;
  if (opts.max_updates < 1) {
    throw UsageError("--max-updates must be at least 1");
  }
  config.max_updates = opts.max_updates;
  if (opts.shuffle_seed_given) {
    config.shuffle_seed = static_cast<std::uint64_t>(opts.shuffle_seed);
  }

  if (opts.steepness_given) {
    if (!(opts.steepness > 0.0)) {
      throw UsageError("--steepness must be positive");
    }
    config.steepness = softperc::Steepness(opts.steepness);
  } else if (config.mode == softperc::TrainMode::tempered_online) {
    std::cerr << "note: --steepness not given, defaulting to 1e6 for "
                 "tempered mode\n";
    config.steepness = softperc::Steepness(1e6);
  }

  const auto dataset = softperc::load_csv_file(opts.data);
  const auto result = softperc::train(dataset, config);

  softperc::ModelFile model;
  model.beta.assign(result.weights.components().begin(),
                    result.weights.components().end());
  model.n = dataset.feature_count();
  model.trained_mode = config.mode;
  model.steepness = config.mode == softperc::TrainMode::tempered_online
                        ? config.steepness.value()
                        : 1.0;
  softperc::save_model_file(model, opts.out);

  std::cout << "mode=" << softperc::to_string(config.mode) << '\n';
  if (config.mode != softperc::TrainMode::perceptron) {
    const bool per_sample = config.mode != softperc::TrainMode::batch_logistic;
    const double resolved =
        config.learning_rate
            ? *config.learning_rate
            : (per_sample ? softperc::safe_step_size(dataset) /
                                static_cast<double>(dataset.size())
                          : softperc::safe_step_size(dataset));
    std::cout << "learning_rate=" << format_double(resolved) << '\n';
  }
  std::cout << "steepness=" << format_double(model.steepness) << '\n'
            << "epochs_run=" << result.report.epochs_run << '\n'
            << "updates_applied=" << result.report.updates_applied << '\n'
            << "final_log_likelihood="
            << format_double(result.report.final_log_likelihood) << '\n'
            << "final_gradient_inf_norm="
            << format_double(result.report.final_gradient_inf_norm) << '\n'
            << "converged=" << (result.report.converged ? "true" : "false")
            << '\n'
            << "stop_reason=" << softperc::to_string(result.report.stop_reason)
            << '\n'
            << "model=" << opts.out << '\n';
  return 0;
}

int run_eval(const EvalOptions& opts) {
  const auto model = softperc::load_model_file(opts.model);
  const auto dataset = softperc::load_csv_file(opts.data);
  if (model.n != dataset.feature_count()) {
    std::cerr << "error: model expects n=" << model.n
              << " features, dataset has n=" << dataset.feature_count()
              << '\n';
    return 2;
  }
  const auto metrics =
      softperc::evaluate(dataset, softperc::WeightVector(model.beta));
  std::cout << "samples=" << dataset.size() << '\n'
            << "accuracy=" << format_double(metrics.accuracy) << '\n'
            << "log_likelihood=" << format_double(metrics.log_likelihood)
            << '\n'
            << "true_positives=" << metrics.true_positives << '\n'
            << "false_positives=" << metrics.false_positives << '\n'
            << "true_negatives=" << metrics.true_negatives << '\n'
            << "false_negatives=" << metrics.false_negatives << '\n';
  return 0;
}

int run_gradcheck(const GradcheckOptions& opts) {
  if (opts.trials < 1) throw UsageError("--trials must be at least 1");
  if (!(opts.h > 0.0)) throw UsageError("--h must be positive");
  if (!(opts.tol > 0.0)) throw UsageError("--tol must be positive");

  const auto dataset = softperc::load_csv_file(opts.data);
  const std::size_t dim = dataset.feature_count() + 1;

  softperc::Xoshiro256StarStar rng(opts.seed);
  std::optional<softperc::GradientCheckReport> worst;
  for (int trial = 0; trial < opts.trials; ++trial) {
    std::vector<double> beta(dim);
    for (double& b : beta) {
      b = 2.0 * rng.next_symmetric();  // uniform on [-2, 2)
    }
    auto report = softperc::gradient_check(
        dataset, softperc::WeightVector(std::move(beta)), opts.h, opts.tol);
    if (!worst || report.max_relative_error > worst->max_relative_error) {
      worst = std::move(report);
    }
  }

  std::cout << "trials=" << opts.trials << '\n' << to_key_values(*worst);
  std::cerr << summary(*worst) << '\n';
  return worst->passed ? 0 : 3;
}

int run_sweep(const SweepOptions& opts) {
  const auto steepness_values = parse_double_list(opts.steepness_list);
  if (steepness_values.empty()) {
    throw UsageError("--steepness-list must not be empty");
  }
  for (double t : steepness_values) {
    if (!(t > 1.0)) {
      throw UsageError("steepness values must be greater than 1, got " +
                       format_double(t));
    }
  }
  if (opts.sweeps < 1) throw UsageError("--sweeps must be at least 1");
  if (!(opts.boundary_eps > 0.0)) {
    throw UsageError("--boundary-eps must be positive");
  }

  const auto dataset = softperc::load_csv_file(opts.data);
  std::cout << "steepness,compared,skipped,max_discrepancy\n";
  for (double t : steepness_values) {
    const auto report = softperc::perceptron_limit_check(
        dataset, opts.sweeps, softperc::Steepness(t), opts.boundary_eps);
    std::cout << format_double(t) << ',' << report.samples_compared << ','
              << report.samples_skipped_near_boundary << ','
              << format_double(report.max_component_discrepancy) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"binary linear classifiers: logistic regression trained by "
               "gradient ascent, the perceptron rule, and the tempered "
               "updates connecting them"};
  app.require_subcommand(1);

  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--kind", synth_opts.kind, "separable|overlapping")
      ->required();
  synth->add_option("--features", synth_opts.features, "feature count n");
  synth->add_option("--samples", synth_opts.samples, "sample count N");
  synth->add_option("--margin", synth_opts.margin,
                    "minimum separator margin (separable only)");
  synth->add_option("--seed", synth_opts.seed, "generator seed");
  synth->add_option("--out,-o", synth_opts.out, "output CSV path")->required();

  TrainOptions train_opts;
  auto* train = app.add_subcommand("train", "train a classifier on a CSV");
  train->add_option("data", train_opts.data, "dataset CSV path")->required();
  train->add_option("--out,-o", train_opts.out, "model output path")
      ->required();
  train
      ->add_option("--mode", train_opts.mode,
                   "batch|online|tempered|perceptron")
      ->required();
  train->add_option("--lr", train_opts.learning_rate,
                    "'auto' or a positive learning rate");
  train->add_option("--epochs", train_opts.epochs, "epoch cap");
  train->add_option("--tol", train_opts.tolerance,
                    "gradient infinity-norm tolerance");
  train
      ->add_option("--steepness", train_opts.steepness,
                   "sigmoid steepness for tempered mode (default 1e6)")
      ->each([&train_opts](const std::string&) {
        train_opts.steepness_given = true;
      });
  train
      ->add_option("--shuffle-seed", train_opts.shuffle_seed,
                   "seed for per-epoch sample shuffling")
      ->each([&train_opts](const std::string&) {
        train_opts.shuffle_seed_given = true;
      });
  train->add_option("--max-updates", train_opts.max_updates,
                    "update cap for perceptron mode");

  EvalOptions eval_opts;
  auto* eval = app.add_subcommand("eval", "evaluate a model on a CSV");
  eval->add_option("model", eval_opts.model, "model file path")->required();
  eval->add_option("data", eval_opts.data, "dataset CSV path")->required();

  GradcheckOptions gradcheck_opts;
  auto* gradcheck = app.add_subcommand(
      "gradcheck", "check the analytic gradient against finite differences");
  // --h would collide with the default -h help alias.
  gradcheck->set_help_flag("--help", "print help");
  gradcheck->add_option("data", gradcheck_opts.data, "dataset CSV path")
      ->required();
  gradcheck->add_option("--h", gradcheck_opts.h, "finite-difference step");
  gradcheck->add_option("--tol", gradcheck_opts.tol,
                        "max relative error allowed");
  gradcheck->add_option("--trials", gradcheck_opts.trials,
                        "number of random weight draws");
  gradcheck->add_option("--seed", gradcheck_opts.seed, "draw seed");

  SweepOptions sweep_opts;
  auto* sweep = app.add_subcommand(
      "sweep",
      "table of perceptron/tempered update agreement across steepness values");
  sweep->add_option("data", sweep_opts.data, "dataset CSV path")->required();
  sweep
      ->add_option("--steepness-list", sweep_opts.steepness_list,
                   "comma-separated steepness values, each > 1")
      ->required();
  sweep->add_option("--sweeps", sweep_opts.sweeps, "passes over the dataset");
  sweep->add_option("--boundary-eps", sweep_opts.boundary_eps,
                    "|score| below which visits are skipped");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return run_synth(synth_opts);
    if (train->parsed()) return run_train(train_opts);
    if (eval->parsed()) return run_eval(eval_opts);
    if (gradcheck->parsed()) return run_gradcheck(gradcheck_opts);
    if (sweep->parsed()) return run_sweep(sweep_opts);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const softperc::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const softperc::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const softperc::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
