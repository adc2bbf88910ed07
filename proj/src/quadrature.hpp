#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace pauli2d::detail {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// One 15/31-point Gauss-Kronrod pass; boost reports the error on [-1, 1].
template <class F>
QuadResult gk_rule(F& f, double a, double b, double* l1 = nullptr) {
  QuadResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0,
                                                                          &r.error, l1);
  r.error *= 0.5 * (b - a);
  return r;
}

template <class F>
void gk_bisect(F& f, double a, double b, double abs_tol, unsigned depth, QuadResult& acc) {
  const QuadResult r = gk_rule(f, a, b);
  if (r.error <= abs_tol || depth == 0) {
    acc.value += r.value;
    acc.error += r.error;
    return;
  }
  const double m = 0.5 * (a + b);
  gk_bisect(f, a, m, 0.5 * abs_tol, depth - 1, acc);
  gk_bisect(f, m, b, 0.5 * abs_tol, depth - 1, acc);
}

// Adaptive Gauss-Kronrod on [a, b] by bisection. Stops when the error is
// below tol times the L1 norm of the first pass, or below abs_floor, which
// keeps integrands that vanish up to rounding from refining forever.
template <class F>
QuadResult gk(F&& f, double a, double b, double tol = 1e-12, unsigned depth = 14,
              double abs_floor = 0.0) {
  QuadResult r;
  if (!(b > a)) return r;
  double l1 = 0.0;
  const QuadResult first = gk_rule(f, a, b, &l1);
  const double abs_tol = std::max(tol * l1, abs_floor);
  if (first.error <= abs_tol || depth == 0) return first;
  const double m = 0.5 * (a + b);
  gk_bisect(f, a, m, 0.5 * abs_tol, depth - 1, r);
  gk_bisect(f, m, b, 0.5 * abs_tol, depth - 1, r);
  return r;
}

// Sum of gk over the panels delimited by the sorted break points.
template <class F>
QuadResult gk_panels(F&& f, std::vector<double> breaks, double tol = 1e-12,
                     unsigned depth = 14, double abs_floor = 0.0) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  QuadResult total;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    QuadResult p = gk(f, breaks[k], breaks[k + 1], tol, depth, abs_floor);
    total.value += p.value;
    total.error += p.error;
  }
  return total;
}

// Break points for radial integrals on [lo, hi]: the given interior points
// plus a geometric ladder starting at `first`.
inline std::vector<double> radial_breaks(double lo, double hi, double first,
                                         const std::vector<double>& interior) {
  std::vector<double> b{lo, hi};
  for (double t = std::max(first, lo); t < hi; t *= 2.0)
    if (t > lo) b.push_back(t);
  for (double t : interior)
    if (t > lo && t < hi) b.push_back(t);
  return b;
}

}  // namespace pauli2d::detail
