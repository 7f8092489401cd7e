#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "softperc/data.hpp"
#include "softperc/model.hpp"
#include "softperc/rng.hpp"
#include "softperc/train.hpp"
#include "softperc/verify.hpp"

namespace {

using namespace softperc;

Dataset bench_dataset(std::size_t n_features, std::size_t n_samples) {
  Xoshiro256StarStar rng(1234);
  std::vector<LabeledSample> samples;
  samples.reserve(n_samples);
  std::vector<double> features(n_features);
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (double& f : features) f = 2.0 * rng.next_symmetric();
    const auto y =
        rng.next_unit() < 0.5 ? Label::negative : Label::positive;
    samples.push_back(LabeledSample{augment(features), y});
  }
  return Dataset(std::move(samples));
}

WeightVector bench_weights(std::size_t dimension) {
  Xoshiro256StarStar rng(4321);
  std::vector<double> beta(dimension);
  for (double& b : beta) b = rng.next_symmetric();
  return WeightVector(std::move(beta));
}

void BM_SigmoidStable(benchmark::State& state) {
  Xoshiro256StarStar rng(7);
  std::vector<double> inputs(4096);
  for (double& z : inputs) z = 50.0 * rng.next_symmetric();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sigmoid_stable(inputs[i]));
    i = (i + 1) & (inputs.size() - 1);
  }
}
BENCHMARK(BM_SigmoidStable);

void BM_SoftplusStable(benchmark::State& state) {
  Xoshiro256StarStar rng(8);
  std::vector<double> inputs(4096);
  for (double& z : inputs) z = 50.0 * rng.next_symmetric();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(softplus_stable(inputs[i]));
    i = (i + 1) & (inputs.size() - 1);
  }
}
BENCHMARK(BM_SoftplusStable);

void BM_LogLikelihood(benchmark::State& state) {
  const auto ds = bench_dataset(5, static_cast<std::size_t>(state.range(0)));
  const auto beta = bench_weights(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_likelihood(ds, beta));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLikelihood)->Arg(100)->Arg(1000)->Arg(10000);

void BM_Gradient(benchmark::State& state) {
  const auto ds = bench_dataset(5, static_cast<std::size_t>(state.range(0)));
  const auto beta = bench_weights(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradient(ds, beta));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gradient)->Arg(100)->Arg(1000)->Arg(10000);

void BM_FiniteDiffGradient(benchmark::State& state) {
  const auto ds = bench_dataset(5, 200);
  const auto beta = bench_weights(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(finite_diff_gradient(ds, beta, 1e-5));
  }
}
BENCHMARK(BM_FiniteDiffGradient);

void BM_BatchEpochs(benchmark::State& state) {
  const auto ds = bench_dataset(5, 500);
  TrainConfig config;
  config.max_epochs = static_cast<int>(state.range(0));
  config.gradient_tolerance = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(batch_gradient_ascent(ds, config));
  }
}
BENCHMARK(BM_BatchEpochs)->Arg(10)->Arg(100);

void BM_PerceptronTrain(benchmark::State& state) {
  SynthSpec spec;
  spec.kind = SynthKind::separable;
  spec.n_features = 4;
  spec.n_samples = static_cast<std::size_t>(state.range(0));
  spec.margin = 0.1;
  spec.seed = 99;
  const auto gen = generate_separable(spec);
  TrainConfig config;
  config.mode = TrainMode::perceptron;
  for (auto _ : state) {
    benchmark::DoNotOptimize(perceptron_train(gen.dataset, config));
  }
}
BENCHMARK(BM_PerceptronTrain)->Arg(100)->Arg(1000);

void BM_GenerateSeparable(benchmark::State& state) {
  SynthSpec spec;
  spec.kind = SynthKind::separable;
  spec.n_features = 4;
  spec.n_samples = static_cast<std::size_t>(state.range(0));
  spec.margin = 0.1;
  spec.seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_separable(spec));
  }
}
BENCHMARK(BM_GenerateSeparable)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
