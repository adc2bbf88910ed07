#pragma once

#include <optional>
#include <vector>

#include "pauli2d/fields.hpp"
#include "pauli2d/grid.hpp"
#include "pauli2d/pauli_operator.hpp"

namespace pauli2d {

// Cutoff f(u): 1 on [0, 1], 0 on [2, inf), 1 - (10 s^3 - 15 s^4 + 6 s^5)
// with s = u - 1 in between. C^2, sup |f'| = 15/8.
double mollifier(double u);
double mollifier_derivative(double u);
inline constexpr double kMollifierSlope = 1.875;

// Radial bump (1 - (r/r0)^2)^3 on r < r0.
double bump_profile(double r, double r0);

struct TrialBasis {
  double rho = 0.0;
  int N = 0;                // j_max; the basis has N + 1 states
  double epsilon_h = 0.0;   // amplitude of the h chi_j correction
  double h_radius = 0.0;    // support radius of h, default rho / 2
  GridSpec grid;
  std::vector<ComplexGrid> ac_states;  // chi_j = exp(-phi) z^j
  std::vector<ComplexGrid> states;     // (f_rho + epsilon_h h) chi_j
  std::vector<double> gram_eigenvalues;
};

// phi must live on `grid` (e.g. the interior of an operator's potential).
TrialBasis build_trial_basis(const ScalarGrid& phi, int N, double rho,
                             double epsilon_h = 0.0, double h_radius = 0.0);
TrialBasis build_trial_basis(const FieldDescriptor& f, const GridSpec& grid, int N,
                             double rho, double epsilon_h = 0.0, double h_radius = 0.0);

struct CertificateReport {
  double rho = 0.0;
  int N = 0;
  double epsilon_h = 0.0;
  double h_radius = 0.0;
  double g = 0.0;
  std::vector<cplx> form_matrix;  // (N+1)^2, row-major
  std::vector<cplx> gram_matrix;
  std::vector<double> generalized_eigenvalues;
  double margin = 0.0;
  int certified_count = 0;
  std::optional<double> tail_bound_value;  // best over the slack sweep
  std::optional<double> epsilon_slack;     // slack achieving it
  std::vector<std::pair<double, double>> tail_bound_sweep;  // (slack, bound)
  double beta_estimate = 0.0;
  double flux = 0.0;
};

// Spin-minus certificate on the basis grid (lambda = 1).
CertificateReport certify(const FieldDescriptor& f, double g, const TrialBasis& basis);
CertificateReport certify(const PauliOperator& op, double flux, const TrialBasis& basis);

// Tries epsilon_h = 0 first; if that does not certify N + 1 states, searches
// the sign and size of epsilon_h and the radius of h, keeping the best result.
CertificateReport certify_with_search(const FieldDescriptor& f, double g,
                                      const GridSpec& grid, int N, double rho);

// 4 pi |f'|^2 / (1 + slack + N - F) (2 rho)^(2 (N - F + slack)).
double tail_bound(const TrialBasis& basis, double F, double slack);
double tail_bound(double rho, int N, double F, double slack);

// Grid quadrature of int_{|x|>rho} |f_rho'|^2 |sum alpha_j chi_j|^2.
double tail_energy(const TrialBasis& basis, const std::vector<cplx>& alpha);

// Gram-type matrix of int |f_rho'(r)|^2 conj(chi_j) chi_k over |x| > rho.
std::vector<cplx> mollifier_tail_matrix(const TrialBasis& basis);

}  // namespace pauli2d
