#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pauli2d/eigensolver.hpp"
#include "pauli2d/error.hpp"
#include "pauli2d/variational.hpp"

using namespace pauli2d;

TEST_CASE("mollifier profile") {
  CHECK(mollifier(0.0) == 1.0);
  CHECK(mollifier(1.0) == 1.0);
  CHECK(mollifier(2.0) == 0.0);
  CHECK(mollifier(3.0) == 0.0);
  CHECK(mollifier(1.5) == doctest::Approx(0.5));
  double slope = 0.0;
  for (int i = 0; i <= 10000; ++i) slope = std::max(slope, std::abs(mollifier_derivative(1.0 + i * 1e-4)));
  CHECK(slope == doctest::Approx(kMollifierSlope).epsilon(1e-8));
  // derivative is the derivative
  for (double u : {1.1, 1.4, 1.77}) {
    const double fd = (mollifier(u + 1e-6) - mollifier(u - 1e-6)) / 2e-6;
    CHECK(mollifier_derivative(u) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(bump_profile(0.0, 2.0) == 1.0);
  CHECK(bump_profile(2.0, 2.0) == 0.0);
}

TEST_CASE("tail bound formula") {
  const double f2 = kMollifierSlope * kMollifierSlope;
  CHECK(tail_bound(10.0, 0, 1.0, 0.5) == doctest::Approx(4 * M_PI * f2 / 0.5 / 20.0));
  for (double rho : {3.0, 7.0})
    CHECK(tail_bound(2 * rho, 2, 2.5, 0.2) / tail_bound(rho, 2, 2.5, 0.2) ==
          doctest::Approx(std::pow(2.0, 2 * (2 - 2.5 + 0.2))));
  CHECK_THROWS_AS(tail_bound(10.0, 1, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(tail_bound(10.0, 0, 1.0, 0.0), DomainError);
}

TEST_CASE("measured tail energy stays below the tail bound") {
  const auto f = FieldDescriptor::gaussian(2.5, 1);
  const GridSpec g{20.0, 160};
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (double rho : {5.0, 10.0}) {
    const auto basis = build_trial_basis(f, g, 2, rho);
    const double eta = 2.5 - 2;
    const double bound = tail_bound(basis, 2.5, eta / 2);
    for (int t = 0; t < 20; ++t) {
      std::vector<cplx> a(3);
      double s = 0;
      for (auto& z : a) {
        z = {nd(rng), nd(rng)};
        s += std::norm(z);
      }
      for (auto& z : a) z /= std::sqrt(s);
      CHECK(tail_energy(basis, a) <= bound);
    }
  }
}

TEST_CASE("mollifier tail contribution decreases with rho") {
  const auto f = FieldDescriptor::gaussian(2.5, 1);
  const GridSpec g{20.0, 160};
  double prev = 1e300, first = 0.0;
  for (double rho : {2.0, 4.0, 6.0, 8.0, 10.0}) {
    const auto m = mollifier_tail_matrix(build_trial_basis(f, g, 2, rho));
    double tr = 0.0;
    for (int j = 0; j < 3; ++j) tr += m[j * 3 + j].real();
    CHECK(tr < prev);
    if (first == 0.0) first = tr;
    prev = tr;
  }
  // the gradient cost of cutting off a slowly decaying state falls like 1/rho
  CHECK(prev < 0.25 * first);
}

TEST_CASE("certificates are sound against the eigensolver") {
  struct Case {
    FieldDescriptor f;
    double g;
    int N;
  };
  const std::vector<Case> cases{{FieldDescriptor::gaussian(2.5, 1), 3.0, 2},
                                {FieldDescriptor::gaussian(1, 1), 4.0, 0},
                                {FieldDescriptor::power_tail(2.5, 1, 1), 3.0, 1}};
  const GridSpec g{16.0, 128};
  for (const auto& c : cases) {
    EigenOptions opt;
    opt.k = c.N + 4;
    const auto spec = lowest_eigenpairs(PauliOperator(c.f, g, c.g, Spin::minus), opt);
    REQUIRE(spec.usable_for_counting());
    int best = 0;
    for (double rho : {2.0, 4.0, 8.0}) {
      const auto cert = certify_with_search(c.f, c.g, g, c.N, rho);
      CHECK(cert.certified_count <= spec.negative_count);
      best = std::max(best, cert.certified_count);
      if (cert.certified_count == c.N + 1) CHECK(cert.beta_estimate > 0.0);
      // form matrix is Hermitian
      const int m = c.N + 1;
      for (int r = 0; r < m; ++r)
        for (int k = 0; k < m; ++k)
          CHECK(std::abs(cert.form_matrix[r * m + k] - std::conj(cert.form_matrix[k * m + r])) <
                1e-10 * (1 + std::abs(cert.form_matrix[r * m + k])));
    }
    CHECK(best == c.N + 1);
  }
}

TEST_CASE("zero field certifies nothing") {
  const auto c = certify(FieldDescriptor::gaussian(0, 1), 3.0,
                         build_trial_basis(FieldDescriptor::gaussian(0, 1), {10.0, 64}, 1, 4.0));
  CHECK(c.certified_count == 0);
  CHECK_FALSE(c.tail_bound_value.has_value());
}

TEST_CASE("domain checks") {
  const auto f = FieldDescriptor::gaussian(2.5, 1);
  const GridSpec g{10.0, 64};
  CHECK_THROWS_AS(build_trial_basis(f, g, 2, 6.0), DomainError);
  const auto basis = build_trial_basis(f, g, 2, 4.0);
  CHECK_THROWS_AS(certify(f, 2.0, basis), DomainError);
  CHECK_THROWS_AS(certify(PauliOperator(f, g, 3.0, Spin::plus), 2.5, basis), DomainError);
  CHECK_THROWS_AS(build_trial_basis(f, {10.0, 16}, 12, 0.5), DegenerateBasisError);
}
