#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include <cmath>
#include <numbers>

#include "pauli2d/error.hpp"
#include "pauli2d/logpotential.hpp"
#include "pauli2d/variational.hpp"
#include "smoothstep.hpp"

namespace pauli2d {

namespace {

using Small = Eigen::MatrixXcd;

std::vector<cplx> to_vector(const Small& M) {
  std::vector<cplx> v;
  for (Eigen::Index r = 0; r < M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.cols(); ++c) v.push_back(M(r, c));
  return v;
}

ComplexGrid combine(const ComplexGrid& u, cplx a, const ComplexGrid& v) {
  ComplexGrid out(u.spec);
  for (std::size_t k = 0; k < u.values.size(); ++k) out.values[k] = u.values[k] + a * v.values[k];
  return out;
}

Small gram(const std::vector<ComplexGrid>& s) {
  const int m = static_cast<int>(s.size());
  Small G(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = r; c < m; ++c) {
      G(r, c) = inner(s[r], s[c]);
      G(c, r) = std::conj(G(r, c));
    }
  return G;
}

Eigen::VectorXd checked_gram_spectrum(const Small& G) {
  Eigen::SelfAdjointEigenSolver<Small> es(G, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();
  double top = ev.maxCoeff();
  if (!(top > 0.0) || !(ev.minCoeff() > 1e-10 * top))
    throw DegenerateBasisError("trial basis is numerically dependent "
                               "(rho too small or grid too coarse)",
                               top > 0.0 ? ev.minCoeff() / top : 0.0, 1e-10);
  return ev;
}

ScalarGrid interior(const ScalarGrid& phi_ext) {
  GridSpec g{phi_ext.spec.L - phi_ext.spec.h(), phi_ext.spec.n - 2};
  ScalarGrid out(g);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i) out(i, j) = phi_ext(i + 1, j + 1);
  return out;
}

}  // namespace

double mollifier(double u) { return 1.0 - detail::smoothstep(u - 1.0); }

double mollifier_derivative(double u) { return -detail::smoothstep_derivative(u - 1.0); }

double bump_profile(double r, double r0) {
  double u = r / r0;
  if (u >= 1.0) return 0.0;
  double v = 1.0 - u * u;
  return v * v * v;
}

TrialBasis build_trial_basis(const ScalarGrid& phi, int N, double rho, double epsilon_h,
                             double h_radius) {
  const GridSpec& grid = phi.spec;
  if (N < 0) throw ConfigError("certify.N must be >= 0");
  if (!(rho > 0.0)) throw ConfigError("certify.rho must be positive");
  if (2.0 * rho > grid.L)
    throw DomainError("trial support 2 rho exceeds the box half-width L");
  if (!std::isfinite(epsilon_h)) throw ConfigError("epsilon_h must be finite");
  if (h_radius <= 0.0) h_radius = 0.5 * rho;
  if (h_radius > rho) throw ConfigError("h radius must not exceed rho");

  TrialBasis b;
  b.rho = rho;
  b.N = N;
  b.epsilon_h = epsilon_h;
  b.h_radius = h_radius;
  b.grid = grid;
  for (int j = 0; j <= N; ++j) {
    ComplexGrid chi = ac_state(phi, j);
    ComplexGrid psi(grid);
    for (int q = 0; q < grid.n; ++q)
      for (int p = 0; p < grid.n; ++p) {
        Point x = grid.node(p, q);
        double r = std::hypot(x.x, x.y);
        double w = mollifier(r / rho) + epsilon_h * bump_profile(r, h_radius);
        psi(p, q) = w * chi(p, q);
      }
    b.ac_states.push_back(std::move(chi));
    b.states.push_back(std::move(psi));
  }
  Eigen::VectorXd ev = checked_gram_spectrum(gram(b.states));
  b.gram_eigenvalues.assign(ev.data(), ev.data() + ev.size());
  return b;
}

TrialBasis build_trial_basis(const FieldDescriptor& f, const GridSpec& grid, int N,
                             double rho, double epsilon_h, double h_radius) {
  return build_trial_basis(potential_grid(f, grid), N, rho, epsilon_h, h_radius);
}

double tail_bound(double rho, int N, double F, double slack) {
  if (!(F > N)) throw DomainError("tail bound needs F > N");
  if (!(slack > 0.0)) throw DomainError("tail bound slack must be positive");
  double denom = 1.0 + slack + N - F;
  if (!(denom > 0.0)) throw DomainError("tail bound needs 1 + slack + N - F > 0");
  return 4.0 * std::numbers::pi * kMollifierSlope * kMollifierSlope / denom *
         std::pow(2.0 * rho, 2.0 * (N - F + slack));
}

double tail_bound(const TrialBasis& basis, double F, double slack) {
  return tail_bound(basis.rho, basis.N, F, slack);
}

double tail_energy(const TrialBasis& basis, const std::vector<cplx>& alpha) {
  if (alpha.size() != basis.ac_states.size())
    throw ContractViolation("tail_energy: alpha has the wrong length");
  const GridSpec& g = basis.grid;
  const double h = g.h();
  double s = 0.0;
  for (int q = 0; q < g.n; ++q)
    for (int p = 0; p < g.n; ++p) {
      Point x = g.node(p, q);
      double r = std::hypot(x.x, x.y);
      if (r <= basis.rho) continue;
      double d = mollifier_derivative(r / basis.rho) / basis.rho;
      cplx v = 0.0;
      for (std::size_t j = 0; j < alpha.size(); ++j) v += alpha[j] * basis.ac_states[j](p, q);
      s += d * d * std::norm(v);
    }
  return s * h * h;
}

std::vector<cplx> mollifier_tail_matrix(const TrialBasis& basis) {
  const GridSpec& g = basis.grid;
  const int m = static_cast<int>(basis.ac_states.size());
  const double h = g.h();
  Small T = Small::Zero(m, m);
  for (int q = 0; q < g.n; ++q)
    for (int p = 0; p < g.n; ++p) {
      Point x = g.node(p, q);
      double r = std::hypot(x.x, x.y);
      if (r <= basis.rho) continue;
      double d = mollifier_derivative(r / basis.rho) / basis.rho;
      for (int a = 0; a < m; ++a)
        for (int c = 0; c < m; ++c)
          T(a, c) += d * d * std::conj(basis.ac_states[a](p, q)) * basis.ac_states[c](p, q);
    }
  return to_vector(T * (h * h));
}

CertificateReport certify(const PauliOperator& op, double flux, const TrialBasis& basis) {
  if (!(op.g() > 2.0)) throw DomainError("certify needs g > 2");
  if (op.spin() != Spin::minus) throw DomainError("certify works with spin minus");
  if (!(basis.grid == op.grid())) throw ContractViolation("certify: grid mismatch");
  const int m = static_cast<int>(basis.states.size());
  const auto& s = basis.states;

  // <psi_j, H psi_k> from the quadratic form by polarization.
  Small F(m, m);
  for (int r = 0; r < m; ++r) {
    F(r, r) = op.energy_form(s[r]);
    for (int c = r + 1; c < m; ++c) {
      const cplx I(0.0, 1.0);
      double qp = op.energy_form(combine(s[r], 1.0, s[c]));
      double qm = op.energy_form(combine(s[r], -1.0, s[c]));
      double qip = op.energy_form(combine(s[r], I, s[c]));
      double qim = op.energy_form(combine(s[r], -I, s[c]));
      F(r, c) = 0.25 * cplx(qp - qm, qim - qip);
      F(c, r) = std::conj(F(r, c));
    }
  }
  Small G = gram(s);
  checked_gram_spectrum(G);

  CertificateReport rep;
  rep.rho = basis.rho;
  rep.N = basis.N;
  rep.epsilon_h = basis.epsilon_h;
  rep.h_radius = basis.h_radius;
  rep.g = op.g();
  rep.flux = flux;
  rep.form_matrix = to_vector(F);
  rep.gram_matrix = to_vector(G);
  Eigen::GeneralizedSelfAdjointEigenSolver<Small> ges(F, G, Eigen::EigenvaluesOnly);
  Eigen::VectorXd theta = ges.eigenvalues();
  rep.generalized_eigenvalues.assign(theta.data(), theta.data() + m);
  rep.margin = 1e-9 * theta.cwiseAbs().maxCoeff();
  for (int j = 0; j < m; ++j)
    if (theta(j) < -rep.margin) ++rep.certified_count;

  // beta: min of int B |f_rho sum alpha chi|^2 over the unit Gram sphere.
  std::vector<ComplexGrid> plain;
  for (int j = 0; j < m; ++j) {
    ComplexGrid v(basis.grid);
    for (int q = 0; q < basis.grid.n; ++q)
      for (int p = 0; p < basis.grid.n; ++p) {
        Point x = basis.grid.node(p, q);
        v(p, q) = mollifier(std::hypot(x.x, x.y) / basis.rho) * basis.ac_states[j](p, q);
      }
    plain.push_back(std::move(v));
  }
  Small W(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = r; c < m; ++c) {
      W(r, c) = op.field_form(plain[r], plain[c]) / op.lambda();
      W(c, r) = std::conj(W(r, c));
    }
  Small G0 = gram(plain);
  checked_gram_spectrum(G0);
  Eigen::GeneralizedSelfAdjointEigenSolver<Small> wes(W, G0, Eigen::EigenvaluesOnly);
  rep.beta_estimate = wes.eigenvalues()(0);

  const double eta = flux - basis.N;
  if (eta > 0.0) {
    for (double frac : {0.25, 0.5, 0.75}) {
      double slack = frac * eta;
      if (!(1.0 + slack + basis.N - flux > 0.0)) continue;
      double v = tail_bound(basis, flux, slack);
      rep.tail_bound_sweep.emplace_back(slack, v);
      if (!rep.tail_bound_value || v < *rep.tail_bound_value) {
        rep.tail_bound_value = v;
        rep.epsilon_slack = slack;
      }
    }
  }
  return rep;
}

CertificateReport certify(const FieldDescriptor& f, double g, const TrialBasis& basis) {
  PauliOperator op(f, basis.grid, g, Spin::minus, 1.0);
  return certify(op, total_flux(f), basis);
}

CertificateReport certify_with_search(const FieldDescriptor& f, double g,
                                      const GridSpec& grid, int N, double rho) {
  const ScalarGrid phi_ext = potential_grid(f, PauliOperator::extended_grid(grid));
  const ScalarGrid phi = interior(phi_ext);
  const PauliOperator op(phi_ext, grid, g, Spin::minus, 1.0);
  const double F = total_flux(f);
  CertificateReport best = certify(op, F, build_trial_basis(phi, N, rho));
  if (best.certified_count == N + 1) return best;
  auto better = [](const CertificateReport& a, const CertificateReport& b) {
    if (a.certified_count != b.certified_count) return a.certified_count > b.certified_count;
    return a.generalized_eigenvalues.back() < b.generalized_eigenvalues.back();
  };
  for (double frac : {0.5, 0.25, 0.125})
    for (double eps : {-0.5, -0.25, -0.1, 0.1, 0.25, 0.5}) {
      CertificateReport c =
          certify(op, F, build_trial_basis(phi, N, rho, eps, frac * rho));
      spdlog::debug("certify search rho={} h_radius={} eps={}: count {}", rho, frac * rho,
                    eps, c.certified_count);
      if (better(c, best)) best = c;
    }
  return best;
}

}  // namespace pauli2d
