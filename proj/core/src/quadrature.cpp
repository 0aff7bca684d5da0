#include "speller/quadrature.hpp"

#include <cmath>

#include "speller/errors.hpp"

namespace speller {
namespace {

struct Panel {
  const std::function<double(double)>& f;
  int maxDepth;

  double refine(double a, double b, double fa, double fm, double fb, double whole,
                double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm)) {
      throw QuadratureFailure("integrand is not finite");
    }
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= maxDepth) {
      throw QuadratureFailure("adaptive Simpson did not converge");
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

double integrateAdaptiveSimpson(const std::function<double(double)>& f, double a, double b,
                                const QuadratureOptions& options) {
  if (!(b > a)) return 0.0;
  const int panels = options.panels < 1 ? 1 : options.panels;
  const double width = (b - a) / panels;
  const double tol = options.absTolerance / panels;
  Panel panel{f, options.maxDepth};

  double total = 0.0;
  double fa = f(a);
  for (int i = 0; i < panels; ++i) {
    const double lo = a + width * i;
    const double hi = (i + 1 == panels) ? b : a + width * (i + 1);
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    const double fb = f(hi);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
      throw QuadratureFailure("integrand is not finite");
    }
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += panel.refine(lo, hi, fa, fm, fb, whole, tol, 0);
    fa = fb;
  }
  return total;
}

}  // namespace speller
