#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "speller/gain.hpp"
#include "speller/grid.hpp"
#include "speller/policy.hpp"
#include "speller/posterior.hpp"
#include "speller/random.hpp"

namespace speller {

struct TrialConfig {
  GridLayout grid = GridLayout::standard();
  LikelihoodModel model = LikelihoodModel::fromDprime(1.0);
  StoppingRule rule = StoppingRule::standard();
  PolicyConfig policy;
  std::uint64_t seed = 0;
  std::uint64_t trialIndex = 0;
  int curveGridSize = kDefaultCurveGridSize;
};

enum class StopReason { kThreshold, kTmax };

struct TrialResult {
  int target = 0;
  int selected = 0;
  bool correct = false;
  int flashesScored = 0;     // stopping time t
  int flashesPresented = 0;  // includes flashes still in flight at the stop
  StopReason stopReason = StopReason::kTmax;
  std::vector<FlashRecord> flashLog;
  std::vector<double> finalPosterior;
};

// Draw from the target distribution if the flash contains the target.
double sampleScore(const FlashGroup& flash, int target, const LikelihoodModel& model, Rng& rng);

// Simulates one character selection with lockstep timing: one presentation
// per step, and the score of the flash presented observationDelay steps
// earlier is delivered in the same step. Stopping only looks at the confirmed
// posterior. The random stream is derived from (seed, trialIndex).
//
// `curve` is required for adaptive paradigms; when null it is taken from a
// process-wide cache.
TrialResult runTrial(const TrialConfig& config,
                     std::shared_ptr<const GainCurve> curve = nullptr);

struct SweepCell {
  Paradigm paradigm = Paradigm::kRcRandom;
  double dprime = 0.0;
  int trials = 0;
  double accuracy = 0.0;
  double accuracyCi95 = 0.0;
  double estScored = 0.0;
  double estPresented = 0.0;
  double estCi95 = 0.0;
  double stopTmaxFraction = 0.0;
};

struct SweepResult {
  std::vector<double> dprimes;
  std::vector<Paradigm> paradigms;
  int trials = 0;
  std::vector<SweepCell> cells;  // paradigm-major, then d' in input order

  bool has(Paradigm paradigm) const;
  const SweepCell& cell(Paradigm paradigm, std::size_t dprimeIndex) const;
  std::vector<double> accuracy(Paradigm paradigm) const;
  std::vector<double> estScored(Paradigm paradigm) const;
};

struct SweepOptions {
  int threads = 1;
  std::shared_ptr<GainCurveCache> curves;
  // Called once per finished cell, in cell order, with the trials in index order.
  std::function<void(const SweepCell&, std::span<const TrialResult>)> onCell;
  // Flash logs are dropped after aggregation unless kept for onCell.
  bool keepFlashLogs = false;
};

// Aggregates `trials` independent trials per (paradigm, d') cell. Each cell
// gets its own stream derived from base.seed, the paradigm and the d' value,
// so results do not depend on thread count or cell order.
SweepResult runSweep(const TrialConfig& base, std::span<const double> dprimes,
                     std::span<const Paradigm> paradigms, int trials,
                     const SweepOptions& options = {});

SweepCell summarizeTrials(Paradigm paradigm, double dprime, std::span<const TrialResult> trials);

}  // namespace speller
