#pragma once
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kdesorb {

// Adaptive Simpson quadrature on a finite interval. The isotherm integrals
// are pre-substituted into smooth bounded form before reaching this, so a
// textbook recursion with Richardson error control is enough; no external
// quadrature dependency needed.
namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth,
                   bool& converged) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double h6 = (b - a) / 12.0;
  const double left = h6 * (fa + 4.0 * flm + fm);
  const double right = h6 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (std::abs(err) <= 15.0 * tol) return left + right + err / 15.0;
  if (depth <= 0) {
    converged = false;
    return left + right + err / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                     converged) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                     converged);
}

}  // namespace detail

// Integrates f over [a, b] to roughly rel_tol relative accuracy (with a small
// absolute floor so integrals near zero terminate). Throws std::runtime_error
// if the recursion bottoms out before converging.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 int max_depth = 52) {
  if (!(b > a)) {
    if (b == a) return 0.0;
    throw std::invalid_argument("integrate: bad interval");
  }
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Scale the tolerance by a first-pass magnitude estimate; the 1e-300 floor
  // only guards against a literally-zero estimate.
  const double tol =
      rel_tol * std::max({std::abs(whole), (b - a) * std::abs(fm), 1e-300});
  bool converged = true;
  const double v = detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol,
                                       max_depth, converged);
  if (!converged) throw std::runtime_error("integrate: failed to converge");
  return v;
}

}  // namespace kdesorb
