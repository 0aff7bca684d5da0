#include "speller/gain.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "speller/errors.hpp"
#include "speller/quadrature.hpp"

namespace speller {

double klDivergence(std::span<const double> g, std::span<const double> q) {
  if (g.size() != q.size()) throw InvalidArgument("KL inputs differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 0.0) continue;
    if (q[i] == 0.0) throw DomainError("KL divergence undefined: q_i = 0 where g_i > 0");
    total += g[i] * std::log(g[i] / q[i]);
  }
  return total;
}

double gainIntegrand(double p1, double z, const LikelihoodModel& model) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw InvalidArgument("p1 must lie in [0, 1]");
  if (p1 == 0.0 || p1 == 1.0) return 0.0;
  const double logL1 = model.logDensity(z, true);
  const double logL0 = model.logDensity(z, false);
  const double a = std::log(p1) + logL1;
  const double b = std::log1p(-p1) + logL0;
  const double hi = std::max(a, b);
  const double logD = hi + std::log1p(std::exp(std::min(a, b) - hi));
  return p1 * std::exp(logL1) * (logL1 - logD) +
         (1.0 - p1) * std::exp(logL0) * (logL0 - logD);
}

double expectedGain(double p1, const LikelihoodModel& model) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw InvalidArgument("p1 must lie in [0, 1]");
  if (p1 == 0.0 || p1 == 1.0) return 0.0;
  if (model.mu0() == model.mu1()) return 0.0;
  const double lo = std::min(model.mu0(), model.mu1()) - 8.0 * model.sigma();
  const double hi = std::max(model.mu0(), model.mu1()) + 8.0 * model.sigma();
  const double value = integrateAdaptiveSimpson(
      [&](double z) { return gainIntegrand(p1, z, model); }, lo, hi);
  // Quadrature noise can dip a hair below zero near the endpoints.
  return std::max(value, 0.0);
}

GainCurve::GainCurve(LikelihoodModel model, std::vector<double> values, double pOpt,
                     double gainMax)
    : model_(model), values_(std::move(values)), p_opt_(pOpt), gain_max_(gainMax) {
  if (values_.size() < 2) throw InvalidArgument("gain curve needs at least 2 samples");
  if (!(pOpt > 0.0 && pOpt < 1.0)) throw InvalidArgument("pOpt must lie in (0, 1)");
}

GainCurve GainCurve::fromSamples(LikelihoodModel model, std::vector<double> values) {
  if (values.size() < 3) throw InvalidArgument("gain curve needs at least 3 samples");
  const auto best = std::max_element(values.begin(), values.end());
  const double gainMax = *best;
  double pOpt = 0.5;
  if (gainMax > 0.0) {
    pOpt = static_cast<double>(best - values.begin()) / (values.size() - 1);
  }
  return GainCurve(model, std::move(values), pOpt, gainMax);
}

GainCurve buildGainCurve(const LikelihoodModel& model, int gridSize) {
  if (gridSize < 101) throw InvalidArgument("gain curve grid needs at least 101 points");
  std::vector<double> values(gridSize);
  for (int i = 0; i < gridSize; ++i) {
    values[i] = expectedGain(static_cast<double>(i) / (gridSize - 1), model);
  }
  const auto best = std::max_element(values.begin(), values.end());
  if (*best <= 0.0) return GainCurve(model, std::move(values), 0.5, 0.0);

  // Golden-section search on the two cells around the grid argmax; the curve
  // is concave so the bracket contains the true maximum.
  const int k = static_cast<int>(best - values.begin());
  double lo = static_cast<double>(std::max(k - 1, 0)) / (gridSize - 1);
  double hi = static_cast<double>(std::min(k + 1, gridSize - 1)) / (gridSize - 1);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = expectedGain(x1, model);
  double f2 = expectedGain(x2, model);
  while (hi - lo > 1e-7) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = expectedGain(x2, model);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = expectedGain(x1, model);
    }
  }
  const double pOpt = 0.5 * (lo + hi);
  const double refined = expectedGain(pOpt, model);
  return GainCurve(model, std::move(values), pOpt, std::max(refined, *best));
}

double lookupGain(const GainCurve& curve, double p1) {
  const auto& values = curve.values();
  const int last = curve.gridSize() - 1;
  const double pos = std::clamp(p1, 0.0, 1.0) * last;
  int i = static_cast<int>(pos);
  if (i >= last) return values[last];
  const double t = pos - i;
  if (t == 0.0) return values[i];
  return (1.0 - t) * values[i] + t * values[i + 1];
}

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'P', 'G', 'A', 'I', 'N', 'C', '1'};

void putU64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

void putF64(std::ostream& out, double v) { putU64(out, std::bit_cast<std::uint64_t>(v)); }

void putU32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> bytes;
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <std::size_t N>
std::uint64_t getBytes(std::istream& in) {
  std::array<unsigned char, N> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), N)) {
    throw InvalidArgument("truncated gain curve file");
  }
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < N; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

double getF64(std::istream& in) { return std::bit_cast<double>(getBytes<8>(in)); }

}  // namespace

void writeGainCurve(std::ostream& out, const GainCurve& curve) {
  out.write(kMagic.data(), kMagic.size());
  putF64(out, curve.model().mu0());
  putF64(out, curve.model().mu1());
  putF64(out, curve.model().sigma());
  putU32(out, static_cast<std::uint32_t>(curve.gridSize()));
  putF64(out, curve.pOpt());
  putF64(out, curve.gainMax());
  for (double v : curve.values()) putF64(out, v);
}

GainCurve readGainCurve(std::istream& in) {
  std::array<char, 8> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw InvalidArgument("not a gain curve file");
  }
  const double mu0 = getF64(in);
  const double mu1 = getF64(in);
  const double sigma = getF64(in);
  const auto gridSize = static_cast<std::uint32_t>(getBytes<4>(in));
  if (gridSize < 2 || gridSize > (1u << 24)) throw InvalidArgument("bad gain curve grid size");
  const double pOpt = getF64(in);
  const double gainMax = getF64(in);
  std::vector<double> values(gridSize);
  for (auto& v : values) v = getF64(in);
  return GainCurve(LikelihoodModel(mu0, mu1, sigma), std::move(values), pOpt, gainMax);
}

std::filesystem::path GainCurveCache::fileFor(const LikelihoodModel& model, int gridSize) const {
  char name[96];
  std::snprintf(name, sizeof name, "gain_%016llx_%016llx_%016llx_%d.bin",
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(model.mu0())),
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(model.mu1())),
                static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(model.sigma())),
                gridSize);
  return directory_.value_or(std::filesystem::path{}) / name;
}

std::shared_ptr<const GainCurve> GainCurveCache::get(const LikelihoodModel& model, int gridSize) {
  const Key key{model.mu0(), model.mu1(), model.sigma(), gridSize};
  std::lock_guard lock(mutex_);
  if (auto it = curves_.find(key); it != curves_.end()) return it->second;

  std::shared_ptr<const GainCurve> curve;
  if (directory_) {
    const auto path = fileFor(model, gridSize);
    if (std::ifstream in(path, std::ios::binary); in) {
      auto loaded = readGainCurve(in);
      if (loaded.model() == model && loaded.gridSize() == gridSize) {
        curve = std::make_shared<const GainCurve>(std::move(loaded));
      }
    }
    if (!curve) {
      curve = std::make_shared<const GainCurve>(buildGainCurve(model, gridSize));
      std::filesystem::create_directories(*directory_);
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      writeGainCurve(out, *curve);
    }
  } else {
    curve = std::make_shared<const GainCurve>(buildGainCurve(model, gridSize));
  }
  curves_.emplace(key, curve);
  return curve;
}

}  // namespace speller
