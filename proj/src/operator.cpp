#include "pauli2d/pauli_operator.hpp"

#include <cmath>

#include "pauli2d/error.hpp"
#include "pauli2d/logpotential.hpp"
#include "pauli2d/parallel.hpp"

namespace pauli2d {

namespace {

constexpr cplx kI{0.0, 1.0};

// Reference data for the 2x2 Gauss rule on the unit square. Gauss point q has
// coordinates (xi[q & 1], xi[q >> 1]); corner k sits at (k & 1, k >> 1).
struct Reference {
  double N[4][4];   // N[q][k]
  double D1[4][4];  // d/dxi
  double D2[4][4];  // d/deta

  Reference() {
    const double xi[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
    for (int q = 0; q < 4; ++q) {
      double s = xi[q & 1], t = xi[q >> 1];
      for (int k = 0; k < 4; ++k) {
        int ox = k & 1, oy = k >> 1;
        double fx = ox ? s : 1.0 - s, fy = oy ? t : 1.0 - t;
        double gx = ox ? 1.0 : -1.0, gy = oy ? 1.0 : -1.0;
        N[q][k] = fx * fy;
        D1[q][k] = gx * fy;
        D2[q][k] = fx * gy;
      }
    }
  }
};

const Reference& ref() {
  static const Reference r;
  return r;
}

}  // namespace

std::string to_string(Spin s) { return s == Spin::plus ? "plus" : "minus"; }

Spin spin_from_string(const std::string& s) {
  if (s == "plus" || s == "+") return Spin::plus;
  if (s == "minus" || s == "-") return Spin::minus;
  throw ConfigError("spin must be 'plus' or 'minus', got '" + s + "'");
}

GridSpec PauliOperator::extended_grid(const GridSpec& grid) {
  return {grid.L + grid.h(), grid.n + 2};
}

PauliOperator::PauliOperator(const FieldDescriptor& f, const GridSpec& grid,
                             double g, Spin spin, double lambda)
    : PauliOperator(potential_grid(f, extended_grid(grid)), grid, g, spin, lambda) {}

PauliOperator::PauliOperator(const ScalarGrid& phi_ext, const GridSpec& grid,
                             double g, Spin spin, double lambda)
    : grid_(grid), g_(g), spin_(spin), lambda_(lambda) {
  grid.validate();
  if (!std::isfinite(g) || g < 0.0) throw ConfigError("g must be finite and >= 0");
  if (!std::isfinite(lambda)) throw ConfigError("lambda must be finite");
  if (!(phi_ext.spec.n == grid.n + 2) ||
      std::abs(phi_ext.spec.L - extended_grid(grid).L) > 1e-12 * grid.L)
    throw ContractViolation("PauliOperator: potential must live on the extended grid");
  mu_ = 0.5 * (2.0 + spin_sign(spin) * g);
  build(phi_ext);
}

void PauliOperator::build(const ScalarGrid& phi_ext) {
  const int n = grid_.n, ne = n + 1;
  const double h = grid_.h(), w = 0.25 * h * h;
  const auto& R = ref();
  const VectorGrid A = vector_potential(phi_ext);
  const GridSpec& ext = phi_ext.spec;

  a_gp_.assign(static_cast<std::size_t>(ne) * ne * 4, 0.0);
  b_gp_.assign(static_cast<std::size_t>(ne) * ne * 4, 0.0);
  stencil_.assign(grid_.size(), std::array<cplx, 9>{});

  for (int b = 0; b < ne; ++b)
    for (int a = 0; a < ne; ++a) {
      const std::size_t e = static_cast<std::size_t>(b) * ne + a;
      double a1[4], a2[4];
      for (int k = 0; k < 4; ++k) {
        std::size_t idx = ext.index(a + (k & 1), b + (k >> 1));
        a1[k] = A.x[idx];
        a2[k] = A.y[idx];
      }
      cplx c[4][4];
      for (int q = 0; q < 4; ++q) {
        double i1 = 0, i2 = 0, curl = 0;
        for (int k = 0; k < 4; ++k) {
          i1 += R.N[q][k] * a1[k];
          i2 += R.N[q][k] * a2[k];
          curl += (R.D1[q][k] * a2[k] - R.D2[q][k] * a1[k]) / h;
        }
        cplx aq = lambda_ * cplx(i1, i2);
        a_gp_[4 * e + q] = aq;
        b_gp_[4 * e + q] = lambda_ * curl;
        for (int k = 0; k < 4; ++k)
          c[q][k] = -kI * (R.D1[q][k] / h) + R.D2[q][k] / h - aq * R.N[q][k];
      }
      for (int k = 0; k < 4; ++k) {
        int ik = a - 1 + (k & 1), jk = b - 1 + (k >> 1);
        if (ik < 0 || jk < 0 || ik >= n || jk >= n) continue;
        auto& row = stencil_[grid_.index(ik, jk)];
        for (int l = 0; l < 4; ++l) {
          int il = a - 1 + (l & 1), jl = b - 1 + (l >> 1);
          if (il < 0 || jl < 0 || il >= n || jl >= n) continue;
          cplx s = 0.0;
          for (int q = 0; q < 4; ++q)
            s += std::conj(c[q][k]) * c[q][l] +
                 mu_ * b_gp_[4 * e + q] * R.N[q][k] * R.N[q][l];
          row[(jl - jk + 1) * 3 + (il - ik + 1)] += s * w / (h * h);
        }
      }
    }
}

template <bool Adjoint>
QuadratureGrid PauliOperator::apply_first_order(const ComplexGrid& psi) const {
  if (!(psi.spec == grid_)) throw ContractViolation("apply_d: grid mismatch");
  const int n = grid_.n, ne = n + 1;
  const double h = grid_.h();
  const auto& R = ref();
  QuadratureGrid out{grid_, std::vector<cplx>(static_cast<std::size_t>(ne) * ne * 4)};
  parallel_for(static_cast<std::size_t>(ne), [&](std::size_t b0, std::size_t b1) {
    for (int b = static_cast<int>(b0); b < static_cast<int>(b1); ++b)
      for (int a = 0; a < ne; ++a) {
        cplx v[4];
        for (int k = 0; k < 4; ++k) {
          int i = a - 1 + (k & 1), j = b - 1 + (k >> 1);
          v[k] = (i < 0 || j < 0 || i >= n || j >= n) ? 0.0 : psi(i, j);
        }
        const std::size_t e = static_cast<std::size_t>(b) * ne + a;
        for (int q = 0; q < 4; ++q) {
          cplx d1 = 0, d2 = 0, val = 0;
          for (int k = 0; k < 4; ++k) {
            d1 += R.D1[q][k] * v[k];
            d2 += R.D2[q][k] * v[k];
            val += R.N[q][k] * v[k];
          }
          d1 /= h;
          d2 /= h;
          cplx aq = a_gp_[4 * e + q];
          out.values[4 * e + q] = Adjoint ? -kI * d1 - d2 - std::conj(aq) * val
                                          : -kI * d1 + d2 - aq * val;
        }
      }
  });
  return out;
}

QuadratureGrid PauliOperator::apply_d(const ComplexGrid& psi) const {
  return apply_first_order<false>(psi);
}

QuadratureGrid PauliOperator::apply_d_adjoint(const ComplexGrid& psi) const {
  return apply_first_order<true>(psi);
}

ComplexGrid PauliOperator::apply_d_dagger(const QuadratureGrid& qg) const {
  const int n = grid_.n, ne = n + 1;
  if (!(qg.spec == grid_) || qg.values.size() != static_cast<std::size_t>(ne) * ne * 4)
    throw ContractViolation("apply_d_dagger: grid mismatch");
  const double h = grid_.h();
  const auto& R = ref();
  ComplexGrid out(grid_);
  for (int b = 0; b < ne; ++b)
    for (int a = 0; a < ne; ++a) {
      const std::size_t e = static_cast<std::size_t>(b) * ne + a;
      for (int k = 0; k < 4; ++k) {
        int i = a - 1 + (k & 1), j = b - 1 + (k >> 1);
        if (i < 0 || j < 0 || i >= n || j >= n) continue;
        cplx s = 0.0;
        for (int q = 0; q < 4; ++q) {
          cplx c = -kI * (R.D1[q][k] / h) + R.D2[q][k] / h - a_gp_[4 * e + q] * R.N[q][k];
          s += std::conj(c) * qg.values[4 * e + q];
        }
        out(i, j) += 0.25 * s;
      }
    }
  return out;
}

void PauliOperator::apply_hamiltonian(const cplx* in, cplx* out) const {
  apply_shifted_block(in, out, 1, 0.0, 1.0, 0.0, nullptr);
}

void PauliOperator::apply_hamiltonian_block(const cplx* in, cplx* out, int m) const {
  apply_shifted_block(in, out, m, 0.0, 1.0, 0.0, nullptr);
}

void PauliOperator::apply_shifted_block(const cplx* in, cplx* out, int m, double shift,
                                        double alpha, double beta,
                                        const cplx* extra) const {
  const int n = grid_.n;
  const std::ptrdiff_t m2 = 2 * static_cast<std::ptrdiff_t>(m);
  const std::ptrdiff_t row = static_cast<std::ptrdiff_t>(n) * m2;
  // std::complex products carry inf/nan recovery branches; spell them out.
  const double* x = reinterpret_cast<const double*>(in);
  const double* z = reinterpret_cast<const double*>(extra);
  double* y = reinterpret_cast<double*>(out);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j0, std::size_t j1) {
    std::vector<double> buf(static_cast<std::size_t>(m2));
    double* __restrict acc = buf.data();
    for (int j = static_cast<int>(j0); j < static_cast<int>(j1); ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t r = grid_.index(i, j);
        const auto& st = stencil_[r];
        const double* xr = x + static_cast<std::ptrdiff_t>(r) * m2;
        for (std::ptrdiff_t c = 0; c < m2; ++c) acc[c] = -shift * xr[c];
        for (int dj = -1; dj <= 1; ++dj) {
          if (j + dj < 0 || j + dj >= n) continue;
          for (int di = -1; di <= 1; ++di) {
            if (i + di < 0 || i + di >= n) continue;
            const double wr = st[(dj + 1) * 3 + di + 1].real();
            const double wi = st[(dj + 1) * 3 + di + 1].imag();
            const double* __restrict p = xr + dj * row + di * m2;
            for (std::ptrdiff_t c = 0; c < m2; c += 2) {
              acc[c] += wr * p[c] - wi * p[c + 1];
              acc[c + 1] += wr * p[c + 1] + wi * p[c];
            }
          }
        }
        double* yr = y + static_cast<std::ptrdiff_t>(r) * m2;
        if (z) {
          const double* zr = z + static_cast<std::ptrdiff_t>(r) * m2;
          for (std::ptrdiff_t c = 0; c < m2; ++c) yr[c] = alpha * acc[c] + beta * zr[c];
        } else {
          for (std::ptrdiff_t c = 0; c < m2; ++c) yr[c] = alpha * acc[c];
        }
      }
  });
}

ComplexGrid PauliOperator::apply_hamiltonian(const ComplexGrid& psi) const {
  if (!(psi.spec == grid_)) throw ContractViolation("apply_hamiltonian: grid mismatch");
  ComplexGrid out(grid_);
  apply_hamiltonian(psi.values.data(), out.values.data());
  return out;
}

double PauliOperator::quadrature_norm_squared(const QuadratureGrid& q) const {
  double s = 0.0;
  for (const auto& v : q.values) s += std::norm(v);
  double h = grid_.h();
  return 0.25 * h * h * s;
}

cplx PauliOperator::field_form(const ComplexGrid& u, const ComplexGrid& v) const {
  if (!(u.spec == grid_) || !(v.spec == grid_))
    throw ContractViolation("field_form: grid mismatch");
  const int n = grid_.n, ne = n + 1;
  const auto& R = ref();
  cplx s = 0.0;
  for (int b = 0; b < ne; ++b)
    for (int a = 0; a < ne; ++a) {
      cplx uu[4], vv[4];
      for (int k = 0; k < 4; ++k) {
        int i = a - 1 + (k & 1), j = b - 1 + (k >> 1);
        bool ghost = i < 0 || j < 0 || i >= n || j >= n;
        uu[k] = ghost ? 0.0 : u(i, j);
        vv[k] = ghost ? 0.0 : v(i, j);
      }
      const std::size_t e = static_cast<std::size_t>(b) * ne + a;
      for (int q = 0; q < 4; ++q) {
        cplx uq = 0, vq = 0;
        for (int k = 0; k < 4; ++k) {
          uq += R.N[q][k] * uu[k];
          vq += R.N[q][k] * vv[k];
        }
        s += b_gp_[4 * e + q] * std::conj(uq) * vq;
      }
    }
  double h = grid_.h();
  return 0.25 * h * h * s;
}

double PauliOperator::energy_form(const ComplexGrid& psi) const {
  return quadrature_norm_squared(apply_d(psi)) + mu_ * field_form(psi, psi).real();
}

double PauliOperator::annihilation_residual(const ComplexGrid& chi, int margin) const {
  const int n = grid_.n, ne = n + 1;
  if (margin < 0 || 2 * margin + 2 > n)
    throw ContractViolation("annihilation_residual: margin too large");
  QuadratureGrid d = apply_d(chi);
  double num = 0.0, den = 0.0;
  for (int b = 1; b < ne - 1; ++b)
    for (int a = 1; a < ne - 1; ++a) {
      if (a - 1 < margin || a > n - 1 - margin || b - 1 < margin || b > n - 1 - margin)
        continue;
      const std::size_t e = static_cast<std::size_t>(b) * ne + a;
      cplx m = 0.25 * (d.values[4 * e] + d.values[4 * e + 1] + d.values[4 * e + 2] +
                       d.values[4 * e + 3]);
      num += std::norm(m);
    }
  for (int j = margin; j < n - margin; ++j)
    for (int i = margin; i < n - margin; ++i) den += std::norm(chi(i, j));
  return std::sqrt(num / den);
}

double PauliOperator::upper_bound() const {
  double m = 0.0;
  for (const auto& row : stencil_) {
    double s = 0.0;
    for (const auto& v : row) s += std::abs(v);
    m = std::max(m, s);
  }
  return m;
}

double PauliOperator::lower_bound() const {
  double m = INFINITY;
  for (const auto& row : stencil_) {
    double s = 0.0;
    for (int k = 0; k < 9; ++k)
      if (k != 4) s += std::abs(row[k]);
    m = std::min(m, row[4].real() - s);
  }
  return m;
}

std::vector<cplx> PauliOperator::dense_matrix() const {
  const int n = grid_.n;
  const std::size_t N = grid_.size();
  if (N > 16384) throw ContractViolation("dense_matrix: grid too large");
  std::vector<cplx> H(N * N, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t r = grid_.index(i, j);
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          H[r * N + grid_.index(ii, jj)] = stencil_[r][(dj + 1) * 3 + di + 1];
        }
    }
  return H;
}

}  // namespace pauli2d
