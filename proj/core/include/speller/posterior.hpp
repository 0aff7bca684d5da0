#pragma once

#include <optional>
#include <span>
#include <vector>

#include "speller/grid.hpp"

namespace speller {

// Gaussian score distributions for non-target (mu0) and target (mu1) flashes
// with a common standard deviation.
class LikelihoodModel {
 public:
  LikelihoodModel(double mu0, double mu1, double sigma);

  // mu0 = 0, sigma = 1, mu1 = d'.
  static LikelihoodModel fromDprime(double dprime) { return {0.0, dprime, 1.0}; }

  double mu0() const { return mu0_; }
  double mu1() const { return mu1_; }
  double sigma() const { return sigma_; }
  double dprime() const { return (mu1_ - mu0_) / sigma_; }

  double logDensity(double z, bool target) const;
  double density(double z, bool target) const;

  bool operator==(const LikelihoodModel&) const = default;

 private:
  double mu0_;
  double mu1_;
  double sigma_;
};

double likelihoodDensity(const LikelihoodModel& model, double z, bool isTarget);

struct FlashRecord {
  FlashGroup flash;
  std::optional<double> score;
  // Largest posterior probability right after this score was applied.
  std::optional<double> maxProb;
};

// Character probabilities plus the presentation/score history of one trial.
// Probabilities are carried in the log domain and exponentiated once per
// update, so long runs of strong evidence do not underflow.
class PosteriorState {
 public:
  static PosteriorState uniform(int characters);
  static PosteriorState fromProbabilities(std::vector<double> probs);

  int size() const { return static_cast<int>(probs_.size()); }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<double>& logProbs() const { return log_probs_; }
  int flashesPresented() const { return flashes_presented_; }
  int scoresObserved() const { return scores_observed_; }
  const std::vector<FlashRecord>& history() const { return history_; }
  double maxProbability() const;

  // Logs a flash whose score has not arrived yet.
  void recordPresentation(FlashGroup flash);

  // Applies one score given the log-likelihoods of the two hypotheses. If an
  // unscored presentation is pending, the flash must match the oldest one.
  void incorporate(const FlashGroup& flash, double z, double logTarget, double logNonTarget);

  std::vector<FlashRecord> takeHistory() { return std::move(history_); }

 private:
  std::vector<double> probs_;
  std::vector<double> log_probs_;
  int flashes_presented_ = 0;
  int scores_observed_ = 0;
  std::vector<FlashRecord> history_;
};

// Multiplies members by exp(logTarget) and the rest by exp(logNonTarget), then
// renormalizes. Both vectors are rewritten; throws DegenerateState if the
// normalizer is not finite.
void reweightLogProbabilities(std::span<double> logProbs, std::span<double> probs,
                              const FlashGroup& flash, double logTarget,
                              double logNonTarget);

PosteriorState updatePosterior(PosteriorState state, const FlashGroup& flash, double z,
                               const LikelihoodModel& model);

// Pluggable form for arbitrary score likelihoods.
PosteriorState updatePosterior(PosteriorState state, const FlashGroup& flash, double z,
                               double logTarget, double logNonTarget);

class StoppingRule {
 public:
  StoppingRule(double pThreshold, int tMax);
  static StoppingRule standard() { return {0.9, 120}; }

  double pThreshold() const { return p_threshold_; }
  int tMax() const { return t_max_; }

 private:
  double p_threshold_;
  int t_max_;
};

enum class StopDecision { kContinue, kThreshold, kTmax };

StopDecision shouldStop(const PosteriorState& state, const StoppingRule& rule);

// Argmax of the probabilities; ties go to the lowest index.
int selectCharacter(std::span<const double> probs);
inline int selectCharacter(const PosteriorState& state) { return selectCharacter(state.probs()); }

}  // namespace speller
