#pragma once

#include <functional>

namespace speller {

struct QuadratureOptions {
  double absTolerance = 1e-11;
  int panels = 32;   // uniform pre-split before adaptive refinement
  int maxDepth = 48;
};

// Adaptive Simpson with Richardson correction. Throws QuadratureFailure if a
// panel cannot reach its share of the tolerance or the integrand is not finite.
double integrateAdaptiveSimpson(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& options = {});

}  // namespace speller
