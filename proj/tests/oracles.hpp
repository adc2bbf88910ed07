// Independent reference computations used by the tests. Nothing here calls
// the library's quadrature or solvers.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pauli2d/grid.hpp"
#include "pauli2d/pauli_operator.hpp"

namespace oracle {

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// int_0^inf f(r) dr through r = e^s on s in [-30, 40]; the integrand must
// decay faster than 1/r.
inline double half_line(const std::function<double(double)>& f, int n = 40000) {
  return simpson([&](double s) { return f(std::exp(s)) * std::exp(s); }, -30.0, 40.0, n);
}

// Flux (1/2pi) int B of a radial profile b(r).
inline double radial_flux(const std::function<double(double)>& b) {
  return half_line([&](double r) { return b(r) * r; });
}

// phi(r) = int_0^inf b(t) t ln max(r, t) dt for a radial profile b. The
// profile must be negligible beyond `cut`.
inline double radial_potential(const std::function<double(double)>& b, double r, double cut) {
  const int n = 4000;
  double inner = r > 0.0 ? simpson([&](double t) { return b(t) * t; }, 0.0, std::min(r, cut), n) : 0.0;
  // t = r + (cut - r) v^2 tames the t log t endpoint when r = 0.
  double outer = 0.0;
  if (r < cut) {
    const double w = cut - r;
    outer = simpson(
        [&](double v) {
          const double t = r + w * v * v;
          return t > 0.0 ? b(t) * t * std::log(t) * 2.0 * w * v : 0.0;
        },
        0.0, 1.0, n);
  }
  return (r > 0.0 ? inner * std::log(r) : 0.0) + outer;
}

// Eigenvalues of the assembled matrix, ascending.
inline std::vector<double> dense_eigenvalues(const pauli2d::PauliOperator& op) {
  const auto m = op.dense_matrix();
  const Eigen::Index N = static_cast<Eigen::Index>(op.dimension());
  Eigen::MatrixXcd M(N, N);
  for (Eigen::Index r = 0; r < N; ++r)
    for (Eigen::Index c = 0; c < N; ++c) M(r, c) = m[static_cast<std::size_t>(r * N + c)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + N};
}

// Smooth random state supported well inside the box: a few random Fourier
// modes times a window vanishing at 0.8 L.
inline pauli2d::ComplexGrid smooth_state(const pauli2d::GridSpec& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::complex<double> c[4][4];
  for (auto& row : c)
    for (auto& z : row) z = {nd(rng), nd(rng)};
  pauli2d::ComplexGrid u(g);
  const double R = 0.8 * g.L;
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) {
      const pauli2d::Point p = g.node(i, j);
      const double s = (p.x * p.x + p.y * p.y) / (R * R);
      if (s >= 1.0) continue;
      const double w = std::exp(-1.0 / (1.0 - s));
      std::complex<double> v = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) v += c[a][b] * std::polar(1.0, (a * p.x + b * p.y) / R);
      u.values[g.index(i, j)] = w * v;
    }
  return u;
}

inline pauli2d::ComplexGrid random_state(const pauli2d::GridSpec& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  pauli2d::ComplexGrid u(g);
  for (auto& z : u.values) z = {nd(rng), nd(rng)};
  return u;
}

}  // namespace oracle
