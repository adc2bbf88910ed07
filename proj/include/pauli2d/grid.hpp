#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace pauli2d {

using cplx = std::complex<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Square box [-L, L]^2 with n x n cell-centred nodes.
// Node (i, j) sits at (-L + (i + 1/2) h, -L + (j + 1/2) h), h = 2L / n,
// stored row-major with j (the y index) as the slow index.
struct GridSpec {
  double L = 1.0;
  int n = 2;

  double h() const { return 2.0 * L / n; }
  double coord(int i) const { return -L + (i + 0.5) * h(); }
  Point node(int i, int j) const { return {coord(i), coord(j)}; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * n + i;
  }

  // Throws ConfigError unless L > 0 and n >= 2.
  void validate() const;

  bool operator==(const GridSpec& o) const { return L == o.L && n == o.n; }
};

// True if every node of `inner` is a node of `outer` (same spacing, centred).
bool nested_in(const GridSpec& inner, const GridSpec& outer);

struct ScalarGrid {
  GridSpec spec;
  std::vector<double> values;

  ScalarGrid() = default;
  explicit ScalarGrid(GridSpec s) : spec(s), values(s.size(), 0.0) {}
  double& operator()(int i, int j) { return values[spec.index(i, j)]; }
  double operator()(int i, int j) const { return values[spec.index(i, j)]; }
};

struct VectorGrid {
  GridSpec spec;
  std::vector<double> x;
  std::vector<double> y;

  VectorGrid() = default;
  explicit VectorGrid(GridSpec s)
      : spec(s), x(s.size(), 0.0), y(s.size(), 0.0) {}
};

struct ComplexGrid {
  GridSpec spec;
  std::vector<cplx> values;

  ComplexGrid() = default;
  explicit ComplexGrid(GridSpec s) : spec(s), values(s.size(), 0.0) {}
  cplx& operator()(int i, int j) { return values[spec.index(i, j)]; }
  cplx operator()(int i, int j) const { return values[spec.index(i, j)]; }
};

// Values at the 2x2 Gauss points of each bilinear element. Elements are the
// (n+1)^2 squares spanned by neighbouring nodes of the grid extended by one
// ghost node on each side; element (a, b) has its lower-left node at (a-1, b-1).
struct QuadratureGrid {
  GridSpec spec;
  std::vector<cplx> values;  // 4 per element, element-major

  int elements_per_side() const { return spec.n + 1; }
};

// Lumped inner product h^2 * sum conj(u) v.
cplx inner(const ComplexGrid& u, const ComplexGrid& v);
double norm(const ComplexGrid& u);

std::string to_csv(const ScalarGrid& g);
std::string to_csv(const VectorGrid& g);

}  // namespace pauli2d
