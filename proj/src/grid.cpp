#include "pauli2d/grid.hpp"

#include <cmath>

#include "format.hpp"
#include "pauli2d/error.hpp"

namespace pauli2d {

void GridSpec::validate() const {
  if (!(L > 0.0) || !std::isfinite(L))
    throw ConfigError("grid half-width L must be positive and finite");
  if (n < 2) throw ConfigError("grid needs at least 2 nodes per side");
}

bool nested_in(const GridSpec& inner, const GridSpec& outer) {
  if (inner.n > outer.n || (outer.n - inner.n) % 2 != 0) return false;
  double hi = inner.h(), ho = outer.h();
  if (std::abs(hi - ho) > 1e-12 * ho) return false;
  double grow = (outer.L - inner.L) / ho;
  return std::abs(grow - (outer.n - inner.n) / 2) < 1e-9;
}

cplx inner(const ComplexGrid& u, const ComplexGrid& v) {
  if (!(u.spec == v.spec)) throw ContractViolation("inner: grid mismatch");
  cplx s = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k)
    s += std::conj(u.values[k]) * v.values[k];
  double h = u.spec.h();
  return s * h * h;
}

double norm(const ComplexGrid& u) { return std::sqrt(inner(u, u).real()); }

std::string to_csv(const ScalarGrid& g) {
  std::string out = "x,y,value\n";
  out.reserve(g.values.size() * 64);
  for (int j = 0; j < g.spec.n; ++j)
    for (int i = 0; i < g.spec.n; ++i) {
      out += detail::fmt_double(g.spec.coord(i));
      out += ',';
      out += detail::fmt_double(g.spec.coord(j));
      out += ',';
      out += detail::fmt_double(g(i, j));
      out += '\n';
    }
  return out;
}

std::string to_csv(const VectorGrid& g) {
  std::string out = "x,y,ax,ay\n";
  out.reserve(g.x.size() * 88);
  for (int j = 0; j < g.spec.n; ++j)
    for (int i = 0; i < g.spec.n; ++i) {
      std::size_t k = g.spec.index(i, j);
      out += detail::fmt_double(g.spec.coord(i));
      out += ',';
      out += detail::fmt_double(g.spec.coord(j));
      out += ',';
      out += detail::fmt_double(g.x[k]);
      out += ',';
      out += detail::fmt_double(g.y[k]);
      out += '\n';
    }
  return out;
}

}  // namespace pauli2d
