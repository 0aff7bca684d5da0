#include "speller/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "speller/errors.hpp"

namespace speller {

LikelihoodModel::LikelihoodModel(double mu0, double mu1, double sigma)
    : mu0_(mu0), mu1_(mu1), sigma_(sigma) {
  if (!std::isfinite(mu0) || !std::isfinite(mu1)) {
    throw InvalidArgument("likelihood means must be finite");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("likelihood sigma must be positive and finite");
  }
}

double LikelihoodModel::logDensity(double z, bool target) const {
  const double u = (z - (target ? mu1_ : mu0_)) / sigma_;
  return -0.5 * u * u - std::log(sigma_) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double LikelihoodModel::density(double z, bool target) const {
  const double u = (z - (target ? mu1_ : mu0_)) / sigma_;
  return std::exp(-0.5 * u * u) / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
}

double likelihoodDensity(const LikelihoodModel& model, double z, bool isTarget) {
  return model.density(z, isTarget);
}

PosteriorState PosteriorState::uniform(int characters) {
  if (characters < 2) throw InvalidArgument("posterior needs at least 2 characters");
  PosteriorState state;
  state.probs_.assign(characters, 1.0 / characters);
  state.log_probs_.assign(characters, -std::log(static_cast<double>(characters)));
  return state;
}

PosteriorState PosteriorState::fromProbabilities(std::vector<double> probs) {
  if (probs.size() < 2) throw InvalidArgument("posterior needs at least 2 characters");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("probabilities must be finite and nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("probabilities must sum to 1");
  PosteriorState state;
  state.log_probs_.resize(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] /= total;
    state.log_probs_[i] = std::log(probs[i]);
  }
  state.probs_ = std::move(probs);
  return state;
}

double PosteriorState::maxProbability() const {
  return *std::max_element(probs_.begin(), probs_.end());
}

void PosteriorState::recordPresentation(FlashGroup flash) {
  if (flash.universe() != size()) throw InvalidArgument("flash group size mismatch");
  history_.push_back({std::move(flash), std::nullopt, std::nullopt});
  ++flashes_presented_;
}

void PosteriorState::incorporate(const FlashGroup& flash, double z, double logTarget,
                                 double logNonTarget) {
  if (flash.universe() != size()) throw InvalidArgument("flash group size mismatch");
  if (!std::isfinite(z)) throw DegenerateState("classifier score is not finite");
  reweightLogProbabilities(log_probs_, probs_, flash, logTarget, logNonTarget);

  // Scores arrive in presentation order, so history_[scores_observed_] is the
  // oldest unscored presentation when one exists.
  const auto slot = static_cast<std::size_t>(scores_observed_);
  if (slot < history_.size()) {
    if (!(history_[slot].flash == flash)) {
      throw InvalidArgument("score does not belong to the oldest pending flash");
    }
  } else {
    history_.push_back({flash, std::nullopt, std::nullopt});
    ++flashes_presented_;
  }
  history_[slot].score = z;
  history_[slot].maxProb = maxProbability();
  ++scores_observed_;
}

void reweightLogProbabilities(std::span<double> logProbs, std::span<double> probs,
                              const FlashGroup& flash, double logTarget,
                              double logNonTarget) {
  if (!std::isfinite(logTarget) || !std::isfinite(logNonTarget)) {
    throw DegenerateState("score likelihood is not finite");
  }
  // The common factor ell0 cancels in the normalization; only members move.
  const double shift = logTarget - logNonTarget;
  for (int m : flash.members()) logProbs[m] += shift;

  const double peak = *std::max_element(logProbs.begin(), logProbs.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logProbs.size(); ++i) {
    probs[i] = std::exp(logProbs[i] - peak);
    total += probs[i];
  }
  if (!std::isfinite(peak) || !(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateState("posterior normalizer is degenerate");
  }
  const double logNorm = peak + std::log(total);
  for (std::size_t i = 0; i < logProbs.size(); ++i) {
    logProbs[i] -= logNorm;
    probs[i] /= total;
  }
}

PosteriorState updatePosterior(PosteriorState state, const FlashGroup& flash, double z,
                               const LikelihoodModel& model) {
  state.incorporate(flash, z, model.logDensity(z, true), model.logDensity(z, false));
  return state;
}

PosteriorState updatePosterior(PosteriorState state, const FlashGroup& flash, double z,
                               double logTarget, double logNonTarget) {
  state.incorporate(flash, z, logTarget, logNonTarget);
  return state;
}

StoppingRule::StoppingRule(double pThreshold, int tMax)
    : p_threshold_(pThreshold), t_max_(tMax) {
  if (!(pThreshold > 0.0 && pThreshold <= 1.0)) {
    throw InvalidArgument("stopping threshold must lie in (0, 1]");
  }
  if (tMax < 1) throw InvalidArgument("tMax must be at least 1");
}

StopDecision shouldStop(const PosteriorState& state, const StoppingRule& rule) {
  if (state.maxProbability() >= rule.pThreshold()) return StopDecision::kThreshold;
  if (state.scoresObserved() >= rule.tMax()) return StopDecision::kTmax;
  return StopDecision::kContinue;
}

int selectCharacter(std::span<const double> probs) {
  if (probs.empty()) throw InvalidArgument("cannot select from an empty distribution");
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

}  // namespace speller
