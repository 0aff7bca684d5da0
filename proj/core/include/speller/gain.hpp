#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include "speller/posterior.hpp"

namespace speller {

// Sum_i g_i log(g_i / q_i), natural log, with 0 log 0 = 0.
double klDivergence(std::span<const double> g, std::span<const double> q);

// Integrand of the expected discrimination gain for a flash whose members
// carry total prior mass p1:
//   p1 l1 log(l1 / D) + (1 - p1) l0 log(l0 / D),  D = (1 - p1) l0 + p1 l1.
double gainIntegrand(double p1, double z, const LikelihoodModel& model);

// Expected KL divergence between the next posterior and the current one,
// integrated over z in [mu0 - 8 sigma, mu1 + 8 sigma].
double expectedGain(double p1, const LikelihoodModel& model);

// Expected gain sampled on a uniform p1 grid over [0, 1].
class GainCurve {
 public:
  GainCurve(LikelihoodModel model, std::vector<double> values, double pOpt, double gainMax);

  // Curve from precomputed samples; pOpt is the grid argmax (0.5 when flat).
  static GainCurve fromSamples(LikelihoodModel model, std::vector<double> values);

  const LikelihoodModel& model() const { return model_; }
  double dprime() const { return model_.dprime(); }
  int gridSize() const { return static_cast<int>(values_.size()); }
  double p1At(int i) const { return static_cast<double>(i) / (gridSize() - 1); }
  const std::vector<double>& values() const { return values_; }
  double pOpt() const { return p_opt_; }
  double gainMax() const { return gain_max_; }

  bool operator==(const GainCurve&) const = default;

 private:
  LikelihoodModel model_;
  std::vector<double> values_;
  double p_opt_;
  double gain_max_;
};

inline constexpr int kDefaultCurveGridSize = 1001;

// Evaluates expectedGain on the grid and refines the argmax by golden-section
// search to 1e-6 in p1.
GainCurve buildGainCurve(const LikelihoodModel& model, int gridSize = kDefaultCurveGridSize);

// Linear interpolation between bracketing grid samples.
double lookupGain(const GainCurve& curve, double p1);

// Binary layout, all fields little-endian:
//   "SPGAINC1" | mu0 mu1 sigma (f64) | gridSize (u32) | pOpt gainMax (f64) |
//   gridSize x f64 samples
void writeGainCurve(std::ostream& out, const GainCurve& curve);
GainCurve readGainCurve(std::istream& in);

// Thread-safe memo of built curves keyed by (mu0, mu1, sigma, gridSize),
// optionally persisted as one file per key under a directory.
class GainCurveCache {
 public:
  GainCurveCache() = default;
  explicit GainCurveCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

  std::shared_ptr<const GainCurve> get(const LikelihoodModel& model,
                                       int gridSize = kDefaultCurveGridSize);

  std::filesystem::path fileFor(const LikelihoodModel& model, int gridSize) const;

 private:
  using Key = std::tuple<double, double, double, int>;
  std::mutex mutex_;
  std::map<Key, std::shared_ptr<const GainCurve>> curves_;
  std::optional<std::filesystem::path> directory_;
};

}  // namespace speller
