#include "speller/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "speller/errors.hpp"

namespace speller {

std::string_view paradigmName(Paradigm paradigm) {
  switch (paradigm) {
    case Paradigm::kRcRandom: return "rc-random";
    case Paradigm::kRcAdaptive: return "rc-adaptive";
    case Paradigm::kGreedyAdaptive: return "greedy-adaptive";
  }
  return "unknown";
}

std::optional<Paradigm> parseParadigm(std::string_view name) {
  for (auto p : {Paradigm::kRcRandom, Paradigm::kRcAdaptive, Paradigm::kGreedyAdaptive}) {
    if (paradigmName(p) == name) return p;
  }
  return std::nullopt;
}

std::string_view odPredictorName(OdPredictor mode) {
  return mode == OdPredictor::kPseudoUpdate ? "pseudo-update" : "frozen-posterior";
}

std::optional<OdPredictor> parseOdPredictor(std::string_view name) {
  if (name == "pseudo-update") return OdPredictor::kPseudoUpdate;
  if (name == "frozen-posterior") return OdPredictor::kFrozenPosterior;
  return std::nullopt;
}

void PolicyConfig::validate(int characters) const {
  if (maxFlashSize < 1 || maxFlashSize > characters) {
    throw InvalidArgument("maxFlashSize must lie in [1, M]");
  }
  if (observationDelay < 0) throw InvalidArgument("observation delay must be >= 0");
  if (ttiMin < 1) throw InvalidArgument("ttiMin must be >= 1");
}

// ConstraintTracker

ConstraintTracker::ConstraintTracker(int characters, int ttiMin, int observationDelay)
    : tti_min_(ttiMin), observation_delay_(observationDelay) {
  if (characters < 1) throw InvalidArgument("tracker needs at least one character");
  if (ttiMin < 1) throw InvalidArgument("ttiMin must be >= 1");
  if (observationDelay < 0) throw InvalidArgument("observation delay must be >= 0");
  blocked_.assign(characters, 0);
}

int ConstraintTracker::blockedCount(const FlashGroup& group) const {
  int count = 0;
  for (int m : group.members()) count += blocked_[m] > 0 ? 1 : 0;
  return count;
}

std::optional<FlashGroup> ConstraintTracker::advance(std::optional<FlashGroup> presented,
                                                     bool scoreArrived) {
  const std::size_t inFlight = pending_.size() + (presented ? 1 : 0);
  if (scoreArrived && inFlight == 0) {
    throw TrackerInconsistency("score arrived with no pending flash");
  }
  if (inFlight - (scoreArrived ? 1 : 0) > static_cast<std::size_t>(observation_delay_)) {
    throw TrackerInconsistency("more flashes in flight than the observation delay allows");
  }
  if (presented && presented->universe() != characters()) {
    throw InvalidArgument("flash group size mismatch");
  }

  if (presented) {
    const auto window = static_cast<std::size_t>(tti_min_ - 1);
    if (window > 0) {
      for (int m : presented->members()) ++blocked_[m];
      recent_.push_back(*presented);
      if (recent_.size() > window) {
        for (int m : recent_.front().members()) --blocked_[m];
        recent_.pop_front();
      }
    }
    pending_.push_back(std::move(*presented));
  }

  std::optional<FlashGroup> scored;
  if (scoreArrived) {
    scored = std::move(pending_.front());
    pending_.pop_front();
  }
  return scored;
}

ConstraintTracker advanceTracker(ConstraintTracker tracker, std::optional<FlashGroup> presented,
                                 bool scoreArrived) {
  tracker.advance(std::move(presented), scoreArrived);
  return tracker;
}

// Row/column paradigms

std::vector<FlashGroup> rcGroups(const GridLayout& grid) {
  std::vector<FlashGroup> groups;
  groups.reserve(grid.rows() + grid.cols());
  for (int r = 0; r < grid.rows(); ++r) groups.push_back(rowGroup(grid, r));
  for (int c = 0; c < grid.cols(); ++c) groups.push_back(columnGroup(grid, c));
  return groups;
}

RcRandomSchedule::RcRandomSchedule(std::vector<FlashGroup> groups)
    : groups_(std::move(groups)), order_(groups_.size()), cursor_(groups_.size()) {
  if (groups_.empty()) throw InvalidArgument("schedule needs at least one group");
  std::iota(order_.begin(), order_.end(), 0);
}

const FlashGroup& RcRandomSchedule::next(Rng& rng) {
  if (cursor_ == order_.size()) {
    std::iota(order_.begin(), order_.end(), 0);
    rng.shuffle(std::span<int>(order_));
    cursor_ = 0;
  }
  return groups_[order_[cursor_++]];
}

std::vector<FlashGroup> feasibleGroups(std::span<const FlashGroup> candidates,
                                       const ConstraintTracker& tracker) {
  std::vector<FlashGroup> out;
  for (const auto& group : candidates) {
    if (tracker.blockedCount(group) == 0) out.push_back(group);
  }
  return out;
}

double groupMass(std::span<const double> probs, const FlashGroup& group) {
  double mass = 0.0;
  for (int m : group.members()) mass += probs[m];
  return mass;
}

namespace {

// Gains this close to the best are treated as ties.
bool nearlyBest(double value, double best) {
  return value >= best - 1e-12 * std::max(1.0, std::abs(best));
}

}  // namespace

FlashGroup nextFlashRcAdaptive(std::span<const double> probs, std::span<const FlashGroup> candidates,
                               const GainCurve& curve, const ConstraintTracker& tracker, Rng& rng) {
  if (candidates.empty()) throw ConfigurationError("no candidate flash groups");
  std::vector<std::size_t> best;
  double bestGain = -std::numeric_limits<double>::infinity();
  std::vector<double> gains(candidates.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (tracker.blockedCount(candidates[i]) != 0) continue;
    gains[i] = lookupGain(curve, groupMass(probs, candidates[i]));
    bestGain = std::max(bestGain, gains[i]);
  }
  if (std::isfinite(bestGain)) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (std::isfinite(gains[i]) && nearlyBest(gains[i], bestGain)) best.push_back(i);
    }
  } else {
    int fewest = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const int blocked = tracker.blockedCount(candidates[i]);
      if (blocked < fewest) {
        fewest = blocked;
        best.clear();
      }
      if (blocked == fewest) best.push_back(i);
    }
  }
  const std::size_t pick = best.size() == 1 ? best.front() : best[rng.below(best.size())];
  return candidates[pick];
}

FlashGroup nextFlashGreedy(std::span<const double> probs, const GainCurve& curve,
                           const ConstraintTracker& tracker, int maxFlashSize, Rng& rng) {
  const int characters = static_cast<int>(probs.size());
  if (maxFlashSize < 1) throw InvalidArgument("maxFlashSize must be >= 1");

  std::vector<int> eligible;
  eligible.reserve(characters);
  for (int m = 0; m < characters; ++m) {
    if (!tracker.isBlocked(m)) eligible.push_back(m);
  }
  if (eligible.empty()) {
    throw ConfigurationError("every character is blocked by the refractory window");
  }
  rng.shuffle(std::span<int>(eligible));
  std::stable_sort(eligible.begin(), eligible.end(),
                   [&](int a, int b) { return probs[a] > probs[b]; });

  const std::size_t cap = std::min<std::size_t>(maxFlashSize, eligible.size());
  std::size_t count = 0;
  double mass = 0.0;
  while (count < cap && mass + probs[eligible[count]] <= curve.pOpt()) {
    mass += probs[eligible[count]];
    ++count;
  }
  if (count == 0) {
    mass = probs[eligible[0]];
    count = 1;
  }

  if (count < cap) {
    const double overMass = mass + probs[eligible[count]];
    if (lookupGain(curve, overMass) > lookupGain(curve, mass)) ++count;
  }
  return FlashGroup(characters, std::vector<int>(eligible.begin(), eligible.begin() + count));
}

std::vector<double> predictPosterior(const PosteriorState& confirmed,
                                     const std::deque<FlashGroup>& pending,
                                     const LikelihoodModel& model, OdPredictor mode) {
  if (mode == OdPredictor::kFrozenPosterior || pending.empty()) return confirmed.probs();
  std::vector<double> logProbs = confirmed.logProbs();
  std::vector<double> probs = confirmed.probs();
  for (const auto& flash : pending) {
    const double p1 = groupMass(probs, flash);
    const double zHat = p1 * model.mu1() + (1.0 - p1) * model.mu0();
    reweightLogProbabilities(logProbs, probs, flash, model.logDensity(zHat, true),
                             model.logDensity(zHat, false));
  }
  return probs;
}

StimulusPolicy::StimulusPolicy(PolicyConfig config, const GridLayout& grid,
                               std::shared_ptr<const GainCurve> curve)
    : config_(config),
      rc_groups_(rcGroups(grid)),
      schedule_(rc_groups_),
      curve_(std::move(curve)) {
  config_.validate(grid.size());
  if (config_.paradigm != Paradigm::kRcRandom && !curve_) {
    throw InvalidArgument("adaptive paradigms need a gain curve");
  }
}

FlashGroup StimulusPolicy::next(std::span<const double> predicted, const ConstraintTracker& tracker,
                                Rng& rng) {
  switch (config_.paradigm) {
    case Paradigm::kRcRandom:
      return schedule_.next(rng);
    case Paradigm::kRcAdaptive:
      return nextFlashRcAdaptive(predicted, rc_groups_, *curve_, tracker, rng);
    case Paradigm::kGreedyAdaptive:
      return nextFlashGreedy(predicted, *curve_, tracker, config_.maxFlashSize, rng);
  }
  throw InvalidArgument("unknown paradigm");
}

}  // namespace speller
