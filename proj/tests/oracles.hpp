#pragma once

// Independent reference computations for tests. Nothing here calls the
// quadrature or curve code under test.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace speller::oracle {

inline double gaussian(double z, double mean, double sigma) {
  const double u = (z - mean) / sigma;
  return std::exp(-0.5 * u * u) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// Expected KL gain by composite trapezoid over [mu0 - 12 sigma, mu1 + 12 sigma],
// written directly from the mixture form with plain densities.
inline double trapezoidExpectedGain(double p1, double mu0, double mu1, double sigma,
                                    long points = 1'000'001) {
  if (p1 <= 0.0 || p1 >= 1.0) return 0.0;
  const double a = std::min(mu0, mu1) - 12.0 * sigma;
  const double b = std::max(mu0, mu1) + 12.0 * sigma;
  const double h = (b - a) / (points - 1);
  double sum = 0.0;
  for (long i = 0; i < points; ++i) {
    const double z = a + h * i;
    const double l1 = gaussian(z, mu1, sigma);
    const double l0 = gaussian(z, mu0, sigma);
    const double d = (1.0 - p1) * l0 + p1 * l1;
    double s = 0.0;
    if (l1 > 0.0) s += p1 * l1 * std::log(l1 / d);
    if (l0 > 0.0) s += (1.0 - p1) * l0 * std::log(l0 / d);
    sum += (i == 0 || i == points - 1) ? 0.5 * s : s;
  }
  return sum * h;
}

// Generic composite trapezoid.
template <typename F>
double trapezoid(F&& f, double a, double b, long points) {
  const double h = (b - a) / (points - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (long i = 1; i < points - 1; ++i) sum += f(a + h * i);
  return sum * h;
}

// Bayes posterior with plain densities (no log domain).
inline std::vector<double> bayesPosterior(std::span<const double> prior,
                                          std::span<const unsigned char> mask, double z,
                                          double mu0, double mu1, double sigma) {
  std::vector<double> post(prior.size());
  double norm = 0.0;
  for (std::size_t m = 0; m < prior.size(); ++m) {
    post[m] = prior[m] * gaussian(z, mask[m] ? mu1 : mu0, sigma);
    norm += post[m];
  }
  for (auto& p : post) p /= norm;
  return post;
}

}  // namespace speller::oracle
