#include "speller/simulation.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "speller/errors.hpp"

namespace speller {
namespace {

GainCurveCache& processCurveCache() {
  static GainCurveCache cache;
  return cache;
}

}  // namespace

double sampleScore(const FlashGroup& flash, int target, const LikelihoodModel& model, Rng& rng) {
  const double mean = flash.contains(target) ? model.mu1() : model.mu0();
  return mean + model.sigma() * rng.normal();
}

TrialResult runTrial(const TrialConfig& config, std::shared_ptr<const GainCurve> curve) {
  const int characters = config.grid.size();
  const PolicyConfig& pc = config.policy;
  pc.validate(characters);
  if (pc.paradigm == Paradigm::kGreedyAdaptive &&
      characters - (pc.ttiMin - 1) * pc.maxFlashSize < 1) {
    throw ConfigurationError("refractory window can block every character");
  }
  if (pc.paradigm != Paradigm::kRcRandom && !curve) {
    curve = processCurveCache().get(config.model, config.curveGridSize);
  }

  Rng rng(deriveSeed(config.seed, config.trialIndex));
  StimulusPolicy policy(pc, config.grid, curve);
  ConstraintTracker tracker(characters, pc.ttiMin, pc.observationDelay);
  PosteriorState state = PosteriorState::uniform(characters);
  std::deque<double> inFlight;

  TrialResult result;
  result.target = static_cast<int>(rng.below(characters));

  const std::size_t delay = static_cast<std::size_t>(pc.observationDelay);
  for (;;) {
    FlashGroup flash =
        pc.paradigm == Paradigm::kRcRandom
            ? policy.next(state.probs(), tracker, rng)
            : policy.next(predictPosterior(state, tracker.pendingFlashes(), config.model,
                                           pc.odPredictor),
                          tracker, rng);
    inFlight.push_back(sampleScore(flash, result.target, config.model, rng));
    state.recordPresentation(flash);

    const bool scoreArrives = tracker.pendingFlashes().size() + 1 > delay;
    auto scored = tracker.advance(std::move(flash), scoreArrives);
    if (!scored) continue;

    const double z = inFlight.front();
    inFlight.pop_front();
    state.incorporate(*scored, z, config.model.logDensity(z, true),
                      config.model.logDensity(z, false));
    const StopDecision decision = shouldStop(state, config.rule);
    if (decision == StopDecision::kContinue) continue;
    result.stopReason =
        decision == StopDecision::kThreshold ? StopReason::kThreshold : StopReason::kTmax;
    break;
  }

  result.selected = selectCharacter(state);
  result.correct = result.selected == result.target;
  result.flashesScored = state.scoresObserved();
  result.flashesPresented = state.flashesPresented();
  result.finalPosterior = state.probs();
  result.flashLog = state.takeHistory();
  return result;
}

bool SweepResult::has(Paradigm paradigm) const {
  for (auto p : paradigms) {
    if (p == paradigm) return true;
  }
  return false;
}

const SweepCell& SweepResult::cell(Paradigm paradigm, std::size_t dprimeIndex) const {
  for (std::size_t p = 0; p < paradigms.size(); ++p) {
    if (paradigms[p] == paradigm) return cells.at(p * dprimes.size() + dprimeIndex);
  }
  throw InvalidArgument("paradigm not present in sweep");
}

std::vector<double> SweepResult::accuracy(Paradigm paradigm) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < dprimes.size(); ++i) out.push_back(cell(paradigm, i).accuracy);
  return out;
}

std::vector<double> SweepResult::estScored(Paradigm paradigm) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < dprimes.size(); ++i) out.push_back(cell(paradigm, i).estScored);
  return out;
}

SweepCell summarizeTrials(Paradigm paradigm, double dprime, std::span<const TrialResult> trials) {
  SweepCell cell;
  cell.paradigm = paradigm;
  cell.dprime = dprime;
  cell.trials = static_cast<int>(trials.size());
  if (trials.empty()) return cell;

  const double n = static_cast<double>(trials.size());
  double correct = 0.0, scored = 0.0, presented = 0.0, tmax = 0.0;
  for (const auto& t : trials) {
    correct += t.correct ? 1.0 : 0.0;
    scored += t.flashesScored;
    presented += t.flashesPresented;
    tmax += t.stopReason == StopReason::kTmax ? 1.0 : 0.0;
  }
  cell.accuracy = correct / n;
  cell.accuracyCi95 = 1.96 * std::sqrt(cell.accuracy * (1.0 - cell.accuracy) / n);
  cell.estScored = scored / n;
  cell.estPresented = presented / n;
  cell.stopTmaxFraction = tmax / n;
  if (trials.size() > 1) {
    double ss = 0.0;
    for (const auto& t : trials) {
      const double d = t.flashesScored - cell.estScored;
      ss += d * d;
    }
    cell.estCi95 = 1.96 * std::sqrt(ss / (n - 1.0) / n);
  }
  return cell;
}

SweepResult runSweep(const TrialConfig& base, std::span<const double> dprimes,
                     std::span<const Paradigm> paradigms, int trials,
                     const SweepOptions& options) {
  if (trials < 1) throw InvalidArgument("a sweep needs at least one trial per cell");
  for (double d : dprimes) {
    if (!std::isfinite(d) || d < 0.0) throw InvalidArgument("d' values must be finite and >= 0");
  }
  auto curves = options.curves ? options.curves : std::make_shared<GainCurveCache>();

  SweepResult sweep;
  sweep.dprimes.assign(dprimes.begin(), dprimes.end());
  sweep.paradigms.assign(paradigms.begin(), paradigms.end());
  sweep.trials = trials;

  const int threads = std::max(1, options.threads);
  std::vector<TrialResult> results(trials);

  for (Paradigm paradigm : paradigms) {
    for (double dprime : dprimes) {
      TrialConfig cellConfig = base;
      cellConfig.policy.paradigm = paradigm;
      cellConfig.model = LikelihoodModel(base.model.mu0(), base.model.mu0() + dprime * base.model.sigma(),
                                         base.model.sigma());
      cellConfig.seed = deriveSeed(deriveSeed(base.seed, static_cast<std::uint64_t>(paradigm)),
                                   std::bit_cast<std::uint64_t>(dprime));
      std::shared_ptr<const GainCurve> curve;
      if (paradigm != Paradigm::kRcRandom) curve = curves->get(cellConfig.model, base.curveGridSize);

      auto runOne = [&](int i) {
        TrialConfig tc = cellConfig;
        tc.trialIndex = static_cast<std::uint64_t>(i);
        results[i] = runTrial(tc, curve);
        if (!options.keepFlashLogs) {
          results[i].flashLog.clear();
          results[i].flashLog.shrink_to_fit();
        }
      };

      if (threads == 1) {
        for (int i = 0; i < trials; ++i) runOne(i);
      } else {
        std::atomic<int> nextIndex{0};
        std::exception_ptr failure;
        std::mutex failureMutex;
        std::vector<std::thread> workers;
        for (int w = 0; w < threads; ++w) {
          workers.emplace_back([&] {
            for (int i = nextIndex++; i < trials; i = nextIndex++) {
              try {
                runOne(i);
              } catch (...) {
                std::lock_guard lock(failureMutex);
                if (!failure) failure = std::current_exception();
              }
            }
          });
        }
        for (auto& w : workers) w.join();
        if (failure) std::rethrow_exception(failure);
      }

      sweep.cells.push_back(summarizeTrials(paradigm, dprime, results));
      if (options.onCell) options.onCell(sweep.cells.back(), results);
    }
  }
  return sweep;
}

}  // namespace speller
