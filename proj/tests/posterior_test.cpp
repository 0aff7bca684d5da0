#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "oracles.hpp"
#include "speller/errors.hpp"
#include "speller/posterior.hpp"
#include "speller/random.hpp"

namespace speller {
namespace {

std::vector<double> randomPrior(Rng& rng, int m) {
  std::vector<double> p(m);
  double total = 0.0;
  for (auto& x : p) {
    x = -std::log(1.0 - rng.uniform());  // Dirichlet(1,...,1)
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

FlashGroup randomFlash(Rng& rng, int m, int maxSize) {
  const int size = 1 + static_cast<int>(rng.below(maxSize));
  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  rng.shuffle(std::span<int>(all));
  return FlashGroup(m, std::vector<int>(all.begin(), all.begin() + size));
}

TEST(LikelihoodTest, DensityExamples) {
  const LikelihoodModel unit(0.0, 1.0, 1.0);
  EXPECT_NEAR(likelihoodDensity(unit, 0.0, false), 0.3989422804, 1e-10);
  EXPECT_DOUBLE_EQ(likelihoodDensity(unit, 0.5, true), likelihoodDensity(unit, 0.5, false));
  const LikelihoodModel two(0.0, 2.0, 1.0);
  EXPECT_NEAR(likelihoodDensity(two, 2.0, true), 0.3989422804, 1e-10);
  EXPECT_NEAR(std::exp(two.logDensity(0.7, true)), two.density(0.7, true), 1e-15);
}

TEST(LikelihoodTest, DprimeAndValidation) {
  EXPECT_DOUBLE_EQ(LikelihoodModel(1.0, 4.0, 2.0).dprime(), 1.5);
  EXPECT_DOUBLE_EQ(LikelihoodModel::fromDprime(2.5).dprime(), 2.5);
  EXPECT_THROW(LikelihoodModel(0.0, 1.0, 0.0), InvalidArgument);
  EXPECT_THROW(LikelihoodModel(0.0, 1.0, -1.0), InvalidArgument);
}

TEST(UpdatePosteriorTest, ZeroDprimeLeavesPriorUnchanged) {
  Rng rng(11);
  const auto model = LikelihoodModel::fromDprime(0.0);
  for (int i = 0; i < 20; ++i) {
    auto prior = PosteriorState::fromProbabilities(randomPrior(rng, 72));
    const auto post = updatePosterior(prior, randomFlash(rng, 72, 20), rng.normal() * 3, model);
    for (int m = 0; m < 72; ++m) EXPECT_NEAR(post.probs()[m], prior.probs()[m], 1e-15);
  }
}

TEST(UpdatePosteriorTest, FourCharacterHandExample) {
  const auto model = LikelihoodModel::fromDprime(1.0);
  const auto post = updatePosterior(PosteriorState::uniform(4), FlashGroup(4, {0, 1}), 1.0, model);
  // l1(1) / (2 l1(1) + 2 l0(1)) with l1(1) = 0.39894228, l0(1) = 0.24197072.
  const double l1 = oracle::gaussian(1.0, 1.0, 1.0);
  const double l0 = oracle::gaussian(1.0, 0.0, 1.0);
  EXPECT_NEAR(post.probs()[0], l1 / (2 * l1 + 2 * l0), 1e-14);
  EXPECT_NEAR(post.probs()[0], 0.3112296656, 1e-10);
  EXPECT_NEAR(post.probs()[1], 0.3112296656, 1e-10);
  EXPECT_NEAR(post.probs()[2], 0.1887703344, 1e-10);
  EXPECT_NEAR(post.probs()[3], 0.1887703344, 1e-10);
  EXPECT_EQ(selectCharacter(post), 0);
  EXPECT_EQ(post.scoresObserved(), 1);
  EXPECT_EQ(post.flashesPresented(), 1);
}

TEST(UpdatePosteriorTest, RepeatedTargetFlashesConvergeMonotonically) {
  const auto model = LikelihoodModel::fromDprime(1.0);
  auto state = PosteriorState::uniform(72);
  const FlashGroup target(72, {1});
  double last = state.probs()[1];
  double lastOdds = 0.0;
  for (int i = 0; i < 300; ++i) {
    state = updatePosterior(std::move(state), target, model.mu1(), model);
    const double odds = state.logProbs()[1] - state.logProbs()[0];
    EXPECT_GT(odds, lastOdds);
    EXPECT_GE(state.probs()[1], last);
    if (last < 0.999) EXPECT_GT(state.probs()[1], last);
    last = state.probs()[1];
    lastOdds = odds;
  }
  EXPECT_GT(last, 1.0 - 1e-9);
}

TEST(UpdatePosteriorTest, PropertyNormalizationAndPositivity) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const auto model = LikelihoodModel::fromDprime(4.0 * rng.uniform());
    auto state = PosteriorState::fromProbabilities(randomPrior(rng, 72));
    for (int step = 0; step < 120; ++step) {
      state = updatePosterior(std::move(state), randomFlash(rng, 72, 12), 6.0 * rng.normal(), model);
      const double total = std::accumulate(state.probs().begin(), state.probs().end(), 0.0);
      ASSERT_LT(std::abs(total - 1.0), 1e-9);
      for (double lp : state.logProbs()) ASSERT_TRUE(std::isfinite(lp));
    }
    for (double p : state.probs()) EXPECT_GE(p, 0.0);
  }
}

TEST(UpdatePosteriorTest, LogDomainSurvivesExtremeEvidence) {
  const auto model = LikelihoodModel::fromDprime(6.0);
  auto state = PosteriorState::uniform(72);
  const FlashGroup others(72, {3, 4, 5});
  for (int i = 0; i < 500; ++i) state = updatePosterior(std::move(state), others, 6.0, model);
  // Unflashed characters are astronomically unlikely but not -inf.
  EXPECT_TRUE(std::isfinite(state.logProbs()[0]));
  EXPECT_LT(state.logProbs()[0], -1000.0);
  EXPECT_NEAR(state.probs()[3], 1.0 / 3.0, 1e-12);
}

TEST(UpdatePosteriorTest, ScaleInvarianceOfLikelihoods) {
  Rng rng(77);
  for (int i = 0; i < 30; ++i) {
    const auto prior = PosteriorState::fromProbabilities(randomPrior(rng, 20));
    const auto flash = randomFlash(rng, 20, 8);
    const double lt = -0.5 - 3.0 * rng.uniform();
    const double ln = -0.5 - 3.0 * rng.uniform();
    const double c = 50.0 * (rng.uniform() - 0.5);
    const auto a = updatePosterior(prior, flash, 0.0, lt, ln);
    const auto b = updatePosterior(prior, flash, 0.0, lt + c, ln + c);
    for (int m = 0; m < 20; ++m) EXPECT_NEAR(a.probs()[m], b.probs()[m], 1e-12);
  }
}

TEST(UpdatePosteriorTest, PermutationEquivariance) {
  Rng rng(5);
  const auto model = LikelihoodModel::fromDprime(1.7);
  for (int i = 0; i < 20; ++i) {
    const auto prior = randomPrior(rng, 30);
    const auto flash = randomFlash(rng, 30, 10);
    std::vector<int> perm(30);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<int>(perm));

    std::vector<double> permutedPrior(30);
    std::vector<int> permutedMembers;
    for (int m = 0; m < 30; ++m) permutedPrior[perm[m]] = prior[m];
    for (int m : flash.members()) permutedMembers.push_back(perm[m]);

    const double z = 2.0 * rng.normal();
    const auto a = updatePosterior(PosteriorState::fromProbabilities(prior), flash, z, model);
    const auto b = updatePosterior(PosteriorState::fromProbabilities(permutedPrior),
                                   FlashGroup(30, permutedMembers), z, model);
    for (int m = 0; m < 30; ++m) EXPECT_NEAR(a.probs()[m], b.probs()[perm[m]], 1e-14);
  }
}

TEST(UpdatePosteriorTest, MatchesPlainDensityBayesRule) {
  Rng rng(99);
  for (int i = 0; i < 20; ++i) {
    const auto model = LikelihoodModel(rng.normal(), rng.normal() + 2.0, 0.5 + rng.uniform());
    const auto prior = randomPrior(rng, 72);
    const auto flash = randomFlash(rng, 72, 9);
    const auto mask = flash.mask();
    const double z = model.mu0() + 2.0 * rng.normal();
    const auto expected = oracle::bayesPosterior(prior, mask, z, model.mu0(), model.mu1(), model.sigma());
    const auto post = updatePosterior(PosteriorState::fromProbabilities(prior), flash, z, model);
    for (int m = 0; m < 72; ++m) EXPECT_NEAR(post.probs()[m], expected[m], 1e-13);
  }
}

TEST(UpdatePosteriorTest, MartingaleUnderMarginal) {
  Rng rng(31);
  const auto model = LikelihoodModel::fromDprime(1.0);
  for (int i = 0; i < 5; ++i) {
    const auto prior = randomPrior(rng, 12);
    const auto flash = randomFlash(rng, 12, 5);
    const auto mask = flash.mask();
    const auto state = PosteriorState::fromProbabilities(prior);
    double p1 = 0.0;
    for (int m : flash.members()) p1 += prior[m];
    for (int m = 0; m < 12; ++m) {
      const double mean = oracle::trapezoid(
          [&](double z) {
            const double marginal = p1 * oracle::gaussian(z, 1.0, 1.0) +
                                    (1.0 - p1) * oracle::gaussian(z, 0.0, 1.0);
            return updatePosterior(state, flash, z, model).probs()[m] * marginal;
          },
          -12.0, 13.0, 20001);
      EXPECT_NEAR(mean, prior[m], 1e-6);
    }
  }
}

TEST(UpdatePosteriorTest, DegenerateScoreIsReported) {
  const auto model = LikelihoodModel::fromDprime(1.0);
  const FlashGroup flash(4, {0});
  EXPECT_THROW(updatePosterior(PosteriorState::uniform(4), flash,
                               std::numeric_limits<double>::infinity(), model),
               DegenerateState);
  EXPECT_THROW(updatePosterior(PosteriorState::uniform(4), flash, std::nan(""), model),
               DegenerateState);
  EXPECT_THROW(updatePosterior(PosteriorState::uniform(4), flash, 0.0,
                               -std::numeric_limits<double>::infinity(), 0.0),
               DegenerateState);
}

TEST(PosteriorStateTest, PendingPresentationsAreScoredInOrder) {
  const auto model = LikelihoodModel::fromDprime(1.0);
  auto state = PosteriorState::uniform(6);
  const FlashGroup a(6, {0, 1}), b(6, {2});
  state.recordPresentation(a);
  state.recordPresentation(b);
  EXPECT_EQ(state.flashesPresented(), 2);
  EXPECT_EQ(state.scoresObserved(), 0);
  EXPECT_THROW(updatePosterior(state, b, 0.3, model), InvalidArgument);
  state = updatePosterior(std::move(state), a, 0.3, model);
  EXPECT_EQ(state.scoresObserved(), 1);
  EXPECT_LE(state.scoresObserved(), state.flashesPresented());
  ASSERT_TRUE(state.history()[0].score.has_value());
  EXPECT_FALSE(state.history()[1].score.has_value());
  EXPECT_DOUBLE_EQ(*state.history()[0].maxProb, state.maxProbability());
}

TEST(PosteriorStateTest, FromProbabilitiesValidates) {
  EXPECT_THROW(PosteriorState::fromProbabilities({0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(PosteriorState::fromProbabilities({1.0}), InvalidArgument);
  EXPECT_THROW(PosteriorState::fromProbabilities({-0.1, 1.1}), InvalidArgument);
  EXPECT_THROW(PosteriorState::uniform(1), InvalidArgument);
}

TEST(StoppingTest, Decisions) {
  const StoppingRule rule(0.9, 120);
  EXPECT_EQ(shouldStop(PosteriorState::fromProbabilities({0.91, 0.09}), rule), StopDecision::kThreshold);
  EXPECT_EQ(shouldStop(PosteriorState::fromProbabilities({0.5, 0.5}), rule), StopDecision::kContinue);

  auto state = PosteriorState::uniform(72);
  const auto flat = LikelihoodModel::fromDprime(0.0);
  const FlashGroup g(72, {0});
  for (int i = 0; i < 119; ++i) state = updatePosterior(std::move(state), g, 0.0, flat);
  EXPECT_EQ(shouldStop(state, rule), StopDecision::kContinue);
  state = updatePosterior(std::move(state), g, 0.0, flat);
  EXPECT_EQ(state.scoresObserved(), 120);
  EXPECT_EQ(shouldStop(state, rule), StopDecision::kTmax);
}

TEST(StoppingTest, ThresholdTakesPrecedenceOverTmax) {
  const StoppingRule rule(0.9, 1);
  const auto model = LikelihoodModel::fromDprime(1.0);
  auto state = PosteriorState::fromProbabilities({0.95, 0.05});
  state = updatePosterior(std::move(state), FlashGroup(2, {0}), 1.0, model);
  EXPECT_EQ(shouldStop(state, rule), StopDecision::kThreshold);
}

TEST(StoppingTest, RuleValidation) {
  EXPECT_THROW(StoppingRule(0.0, 10), InvalidArgument);
  EXPECT_THROW(StoppingRule(1.5, 10), InvalidArgument);
  EXPECT_THROW(StoppingRule(0.9, 0), InvalidArgument);
  EXPECT_NO_THROW(StoppingRule(1.0, 1));
}

TEST(SelectCharacterTest, ArgmaxWithLowestIndexTies) {
  const std::vector<double> a{0.1, 0.7, 0.2};
  EXPECT_EQ(selectCharacter(a), 1);
  const std::vector<double> uniform(72, 1.0 / 72);
  EXPECT_EQ(selectCharacter(uniform), 0);
  const std::vector<double> tied{0.1, 0.45, 0.45};
  EXPECT_EQ(selectCharacter(tied), 1);
}

}  // namespace
}  // namespace speller
