#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pauli2d/error.hpp"
#include "pauli2d/logpotential.hpp"
#include "pauli2d/pauli_operator.hpp"

using namespace pauli2d;

namespace {

const FieldDescriptor kField = FieldDescriptor::linear_combination(
    {{1.0, FieldDescriptor::gaussian(2.5, 1, {0.3, -0.2})},
     {0.5, FieldDescriptor::angular_power_tail(1, 1, 1, 1)}});

// Centre block of a grid function on a larger concentric grid.
ScalarGrid crop(const ScalarGrid& big, int n) {
  const int off = (big.spec.n - n) / 2;
  const GridSpec g{big.spec.L - off * big.spec.h(), n};
  ScalarGrid out(g);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out(i, j) = big(i + off, j + off);
  return out;
}

ScalarGrid negate(ScalarGrid s) {
  for (double& v : s.values) v = -v;
  return s;
}

}  // namespace

TEST_CASE("Hamiltonian is Hermitian in the lumped product") {
  std::mt19937_64 rng(1);
  for (Spin s : {Spin::plus, Spin::minus}) {
    const PauliOperator op(kField, {4.0, 20}, 3.0, s, 0.8);
    for (int t = 0; t < 10; ++t) {
      const auto u = oracle::random_state(op.grid(), rng), v = oracle::random_state(op.grid(), rng);
      const cplx a = inner(u, op.apply_hamiltonian(v)), b = std::conj(inner(v, op.apply_hamiltonian(u)));
      CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    }
    const auto m = op.dense_matrix();
    const std::size_t N = op.dimension();
    double asym = 0.0;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c)
        asym = std::max(asym, std::abs(m[r * N + c] - std::conj(m[c * N + r])));
    CHECK(asym < 1e-12);
  }
}

TEST_CASE("stencil equals the finite-element form D*D + mu B") {
  std::mt19937_64 rng(2);
  const PauliOperator op(kField, {4.0, 24}, 3.5, Spin::minus);
  for (int t = 0; t < 5; ++t) {
    const auto u = oracle::random_state(op.grid(), rng), v = oracle::random_state(op.grid(), rng);
    ComplexGrid s(u.spec), d(u.spec), si(u.spec), di(u.spec);
    for (std::size_t k = 0; k < u.values.size(); ++k) {
      s.values[k] = u.values[k] + v.values[k];
      d.values[k] = u.values[k] - v.values[k];
      si.values[k] = u.values[k] + cplx(0, 1) * v.values[k];
      di.values[k] = u.values[k] - cplx(0, 1) * v.values[k];
    }
    // <u, H v> by polarization of the quadratic form
    const cplx form = 0.25 * (op.energy_form(s) - op.energy_form(d)) -
                      0.25 * cplx(0, 1) * (op.energy_form(si) - op.energy_form(di));
    const cplx stencil = inner(u, op.apply_hamiltonian(v));
    CHECK(std::abs(form - stencil) <= 1e-10 * std::abs(stencil));
    // D-dagger is the adjoint of D
    const auto du = op.apply_d(u);
    const auto ddu = op.apply_d_dagger(du);
    CHECK(std::abs(inner(u, ddu).real() - op.quadrature_norm_squared(du)) <
          1e-10 * op.quadrature_norm_squared(du));
    // H = D-dagger D + mu B
    const cplx mb = inner(u, op.apply_hamiltonian(u)) - inner(u, ddu);
    CHECK(std::abs(mb - op.mu() * op.field_form(u, u)) < 1e-9 * std::abs(inner(u, ddu)));
  }
}

TEST_CASE("supersymmetry identity holds to rounding") {
  std::mt19937_64 rng(3);
  for (double lambda : {1.0, 0.6}) {
    const PauliOperator op(kField, {5.0, 48}, 3.0, Spin::minus, lambda);
    for (int t = 0; t < 5; ++t) {
      const auto u = t % 2 ? oracle::random_state(op.grid(), rng)
                           : oracle::smooth_state(op.grid(), rng);
      const double lhs =
          op.quadrature_norm_squared(op.apply_d(u)) + 2.0 * op.field_form(u, u).real();
      const double rhs = op.quadrature_norm_squared(op.apply_d_adjoint(u));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
    }
  }
}

TEST_CASE("spin flip with reversed field is complex conjugation") {
  const GridSpec g{3.0, 12};
  const auto phi = potential_grid(kField, PauliOperator::extended_grid(g));
  const PauliOperator a(phi, g, 3.0, Spin::plus), b(negate(phi), g, 3.0, Spin::minus);
  const auto ea = oracle::dense_eigenvalues(a), eb = oracle::dense_eigenvalues(b);
  for (std::size_t i = 0; i < ea.size(); ++i) CHECK(ea[i] == doctest::Approx(eb[i]).epsilon(1e-10));
}

TEST_CASE("g = 2 spin minus is D*D and non-negative") {
  const PauliOperator op(FieldDescriptor::gaussian(2.5, 1), {4.0, 20}, 2.0, Spin::minus);
  CHECK(op.mu() == 0.0);
  const auto e = oracle::dense_eigenvalues(op);
  CHECK(e.front() > -1e-10);
  // the zero mode sits far below the free Dirichlet ground state
  const double free = 2.0 * std::pow(M_PI / 8.0, 2);
  CHECK(e[0] < 0.1 * free);
}

TEST_CASE("Dirichlet monotonicity on nested boxes") {
  const double h = 0.25;
  const auto big_phi = potential_grid(kField, PauliOperator::extended_grid({h * 14, 28}));
  double prev = 1e300;
  for (int n : {12, 16, 20, 24, 28}) {
    const GridSpec g{h * n / 2, n};
    const PauliOperator op(crop(big_phi, n + 2), g, 3.0, Spin::minus);
    const double low = oracle::dense_eigenvalues(op).front();
    CHECK(low <= prev + 1e-12);
    prev = low;
  }
}

TEST_CASE("Gershgorin bounds enclose the spectrum") {
  const PauliOperator op(kField, {4.0, 16}, 4.0, Spin::minus);
  const auto e = oracle::dense_eigenvalues(op);
  CHECK(op.lower_bound() <= e.front());
  CHECK(op.upper_bound() >= e.back());
}

TEST_CASE("block application matches single application") {
  std::mt19937_64 rng(4);
  const PauliOperator op(kField, {4.0, 20}, 3.0, Spin::plus);
  const int m = 3;
  const std::size_t N = op.dimension();
  std::vector<ComplexGrid> cols;
  std::vector<cplx> in(N * m), out(N * m);
  for (int c = 0; c < m; ++c) {
    cols.push_back(oracle::random_state(op.grid(), rng));
    for (std::size_t r = 0; r < N; ++r) in[r * m + c] = cols[c].values[r];
  }
  op.apply_hamiltonian_block(in.data(), out.data(), m);
  for (int c = 0; c < m; ++c) {
    const auto h = op.apply_hamiltonian(cols[c]);
    for (std::size_t r = 0; r < N; ++r) CHECK(std::abs(out[r * m + c] - h.values[r]) < 1e-12);
  }
}

TEST_CASE("zero field gives the real Laplacian") {
  const PauliOperator op(FieldDescriptor::gaussian(0, 1), {2.0, 10}, 3.0, Spin::minus);
  const auto m = op.dense_matrix();
  for (const auto& z : m) CHECK(std::abs(z.imag()) < 1e-14);
  CHECK(oracle::dense_eigenvalues(op).front() > 0.0);
}

TEST_CASE("Aharonov-Casher states are annihilated at second order") {
  const auto f = FieldDescriptor::gaussian(2.5, 1);
  for (int j : {0, 1, 2}) {
    double prev = 0.0;
    for (int n : {48, 96, 192}) {
      const GridSpec g{6.0, n};
      const PauliOperator op(f, g, 3.0, Spin::minus);
      const auto phi = potential_grid(f, g);
      const double r = op.annihilation_residual(ac_state(phi, j), n / 16);
      if (prev > 0.0) CHECK(std::log2(prev / r) > 1.9);
      prev = r;
    }
  }
}

TEST_CASE("contract and configuration errors") {
  const PauliOperator op(kField, {2.0, 8}, 3.0, Spin::minus);
  CHECK_THROWS_AS(op.apply_hamiltonian(ComplexGrid(GridSpec{2.0, 10})), ContractViolation);
  CHECK_THROWS_AS(PauliOperator(kField, {2.0, 8}, -1.0, Spin::minus), ConfigError);
  CHECK_THROWS_AS(PauliOperator(kField, {0.0, 8}, 3.0, Spin::minus), ConfigError);
  CHECK_THROWS_AS(spin_from_string("up"), ConfigError);
  CHECK(spin_from_string("+") == Spin::plus);
  CHECK_THROWS_AS(PauliOperator(kField, {200.0, 200}, 3.0, Spin::minus).dense_matrix(),
                  ContractViolation);
}
