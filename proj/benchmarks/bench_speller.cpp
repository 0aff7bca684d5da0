#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "speller/gain.hpp"
#include "speller/policy.hpp"
#include "speller/simulation.hpp"

namespace {

using namespace speller;

std::shared_ptr<const GainCurve> sharedCurve(double dprime) {
  static auto curve = std::make_shared<const GainCurve>(buildGainCurve(LikelihoodModel::fromDprime(dprime)));
  return curve;
}

void BM_ExpectedGain(benchmark::State& state) {
  const auto model = LikelihoodModel::fromDprime(2.0);
  double p1 = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expectedGain(p1, model));
    p1 = p1 > 0.98 ? 0.01 : p1 + 0.013;
  }
}
BENCHMARK(BM_ExpectedGain);

void BM_BuildGainCurve(benchmark::State& state) {
  const auto model = LikelihoodModel::fromDprime(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(buildGainCurve(model, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BuildGainCurve)->Arg(101)->Arg(1001)->Unit(benchmark::kMillisecond);

void BM_UpdatePosterior(benchmark::State& state) {
  const auto model = LikelihoodModel::fromDprime(1.0);
  const auto flash = rowGroup(GridLayout::standard(), 3);
  auto posterior = PosteriorState::uniform(72);
  Rng rng(1);
  for (auto _ : state) {
    posterior = updatePosterior(std::move(posterior), flash, rng.normal() * 0.1, model);
    benchmark::DoNotOptimize(posterior.probs().data());
  }
}
BENCHMARK(BM_UpdatePosterior);

void BM_NextFlashGreedy(benchmark::State& state) {
  const auto curve = sharedCurve(1.0);
  ConstraintTracker tracker(72, 3, 0);
  Rng rng(2);
  std::vector<double> probs(72);
  double total = 0.0;
  for (auto& p : probs) total += (p = rng.uniform());
  for (auto& p : probs) p /= total;
  for (auto _ : state) {
    const auto g = nextFlashGreedy(probs, *curve, tracker, 9, rng);
    tracker.advance(g, true);
  }
}
BENCHMARK(BM_NextFlashGreedy);

void BM_RunTrial(benchmark::State& state) {
  TrialConfig config;
  config.policy.paradigm = static_cast<Paradigm>(state.range(0));
  config.policy.observationDelay = static_cast<int>(state.range(1));
  const auto curve = sharedCurve(1.0);
  std::uint64_t index = 0;
  for (auto _ : state) {
    config.trialIndex = index++;
    benchmark::DoNotOptimize(runTrial(config, curve).flashesScored);
  }
}
BENCHMARK(BM_RunTrial)
    ->ArgsProduct({{0, 1, 2}, {0, 6}})
    ->ArgNames({"paradigm", "od"})
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
