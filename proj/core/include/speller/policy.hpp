#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "speller/gain.hpp"
#include "speller/grid.hpp"
#include "speller/posterior.hpp"
#include "speller/random.hpp"

namespace speller {

enum class Paradigm { kRcRandom, kRcAdaptive, kGreedyAdaptive };
enum class OdPredictor { kPseudoUpdate, kFrozenPosterior };

std::string_view paradigmName(Paradigm paradigm);
std::optional<Paradigm> parseParadigm(std::string_view name);
std::string_view odPredictorName(OdPredictor mode);
std::optional<OdPredictor> parseOdPredictor(std::string_view name);

struct PolicyConfig {
  Paradigm paradigm = Paradigm::kGreedyAdaptive;
  int maxFlashSize = 9;
  int observationDelay = 0;  // presentations that happen before a score arrives
  int ttiMin = 1;            // 1 = no refractory restriction
  OdPredictor odPredictor = OdPredictor::kPseudoUpdate;

  void validate(int characters) const;
};

// Refractory window and in-flight queue for one trial.
//
// A character is blocked while it appears in any of the last ttiMin - 1
// presented groups, so with ttiMin = 3 a character flashed at event t may
// appear again at event t + 3 (the sequence T N N T). Presented flashes wait
// in the pending queue until their score arrives; at most observationDelay
// flashes can be in flight after any step.
class ConstraintTracker {
 public:
  ConstraintTracker(int characters, int ttiMin, int observationDelay);

  int characters() const { return static_cast<int>(blocked_.size()); }
  int ttiMin() const { return tti_min_; }
  int observationDelay() const { return observation_delay_; }

  bool isBlocked(int character) const { return blocked_[character] > 0; }
  int blockedCount(const FlashGroup& group) const;
  const std::deque<FlashGroup>& recentFlashes() const { return recent_; }
  const std::deque<FlashGroup>& pendingFlashes() const { return pending_; }

  // One lockstep event: optionally present a flash, then optionally consume
  // the score of the oldest pending flash (returned). Throws
  // TrackerInconsistency, without modifying the tracker, if a score arrives
  // with nothing pending or the queue would exceed the observation delay.
  std::optional<FlashGroup> advance(std::optional<FlashGroup> presented, bool scoreArrived);

 private:
  int tti_min_;
  int observation_delay_;
  std::vector<int> blocked_;
  std::deque<FlashGroup> recent_;
  std::deque<FlashGroup> pending_;
};

ConstraintTracker advanceTracker(ConstraintTracker tracker, std::optional<FlashGroup> presented,
                                 bool scoreArrived);

// Row groups followed by column groups.
std::vector<FlashGroup> rcGroups(const GridLayout& grid);

// Row/column groups in shuffled blocks: every group once per block.
class RcRandomSchedule {
 public:
  explicit RcRandomSchedule(std::vector<FlashGroup> groups);

  const FlashGroup& next(Rng& rng);
  int blockSize() const { return static_cast<int>(groups_.size()); }

 private:
  std::vector<FlashGroup> groups_;
  std::vector<int> order_;
  std::size_t cursor_;
};

std::vector<FlashGroup> feasibleGroups(std::span<const FlashGroup> candidates,
                                       const ConstraintTracker& tracker);

// Sum of probabilities over the group's members.
double groupMass(std::span<const double> probs, const FlashGroup& group);

// Picks the feasible candidate with the largest looked-up gain, ties uniform
// at random. With no feasible candidate, falls back to the group with the
// fewest blocked characters (ties uniform at random).
FlashGroup nextFlashRcAdaptive(std::span<const double> probs, std::span<const FlashGroup> candidates,
                               const GainCurve& curve, const ConstraintTracker& tracker, Rng& rng);

// Greedy flash construction around pOpt.
//
// Eligible characters are ordered by descending probability (ties shuffled).
// The "under" group is the longest prefix whose mass stays <= pOpt within the
// size cap; the "over" group adds the next eligible character. The one with
// the larger looked-up gain wins, the under group on ties. An empty under
// group becomes the single most probable eligible character.
FlashGroup nextFlashGreedy(std::span<const double> probs, const GainCurve& curve,
                           const ConstraintTracker& tracker, int maxFlashSize, Rng& rng);

// Posterior used for selection while flashes are still in flight. In
// pseudo-update mode each pending flash is applied with its expected score
// P1 mu1 + (1 - P1) mu0; in frozen mode the confirmed posterior is returned.
std::vector<double> predictPosterior(const PosteriorState& confirmed,
                                     const std::deque<FlashGroup>& pending,
                                     const LikelihoodModel& model, OdPredictor mode);

class StimulusPolicy {
 public:
  StimulusPolicy(PolicyConfig config, const GridLayout& grid,
                 std::shared_ptr<const GainCurve> curve);

  const PolicyConfig& config() const { return config_; }

  // rc-random is the conventional baseline and ignores the refractory window.
  FlashGroup next(std::span<const double> predicted, const ConstraintTracker& tracker, Rng& rng);

 private:
  PolicyConfig config_;
  std::vector<FlashGroup> rc_groups_;
  RcRandomSchedule schedule_;
  std::shared_ptr<const GainCurve> curve_;
};

}  // namespace speller
