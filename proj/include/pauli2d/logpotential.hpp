#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pauli2d/fields.hpp"
#include "pauli2d/grid.hpp"

namespace pauli2d {

// phi(x) = (1/2pi) int B(y) ln|x - y| dy by adaptive quadrature.
double potential_at(const FieldDescriptor& f, Point x);
// (d1 phi, d2 phi) at x.
std::array<double, 2> potential_gradient_at(const FieldDescriptor& f, Point x);
// A = (-d2 phi, d1 phi) at x.
std::array<double, 2> vector_potential_at(const FieldDescriptor& f, Point x);

// phi on the grid nodes by FFT convolution of the sampled field with the
// cell-averaged log kernel, plus a monopole term for the flux outside the box.
ScalarGrid potential_grid(const FieldDescriptor& f, const GridSpec& grid);

// A = (-d2 phi, d1 phi) by fourth-order central differences (lower order in
// the two outermost node rings).
VectorGrid vector_potential(const ScalarGrid& phi);

// d1 A2 - d2 A1 by second-order central differences; zero on the edge ring.
ScalarGrid discrete_curl(const VectorGrid& a);

// exp(-phi) z^j at the nodes.
ComplexGrid ac_state(const ScalarGrid& phi, int j);
ComplexGrid ac_state(const FieldDescriptor& f, const GridSpec& grid, int j);

struct AsymptoticsReport {
  double flux = 0.0;
  bool zero_flux = false;
  std::vector<double> radii;
  // max over angles of |phi - F ln r| / ln r
  std::vector<double> max_relative_deviation;
  bool deviation_decreasing = false;
  // zero-flux fields only: max over angles of |grad phi|, and the slope of
  // its log against log r
  std::vector<double> max_gradient;
  std::optional<double> gradient_exponent_fit;
};

AsymptoticsReport asymptotics_probe(const FieldDescriptor& f,
                                    const std::vector<double>& radii,
                                    int angles = 64);

}  // namespace pauli2d
