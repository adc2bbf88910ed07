#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pauli2d/eigensolver.hpp"
#include "pauli2d/fields.hpp"
#include "pauli2d/grid.hpp"

namespace pauli2d {

struct Gamma2Result {
  double gamma2 = 0.0;       // (1/2pi) int A^2 + (g^2/4) (1/2pi) int phi B
  double closed_form = 0.0;  // -(g^2 - 4) / (8 pi) int A^2
  double a_squared = 0.0;    // int A^2
  double phi_b = 0.0;        // int phi B
  double relative_gap = 0.0; // |gamma2 - closed_form| / |closed_form|
};

// Both evaluation paths on one grid. The field must have analytic flux 0.
Gamma2Result gamma2_paths(const FieldDescriptor& f, double g, const GridSpec& grid);
double gamma2(const FieldDescriptor& f, double g, Spin spin, const GridSpec& grid);

struct GreenIdentityReport {
  double a_squared = 0.0;
  double phi_b = 0.0;
  double relative_gap = 0.0;   // |int A^2 + int phi B| / int A^2
  double boundary_term = 0.0;  // sum over the edge of phi d_n phi h
};

GreenIdentityReport green_identity_check(const FieldDescriptor& f, const GridSpec& grid);

enum class SweepStatus { resolved, unresolved, not_converged };
std::string to_string(SweepStatus s);

struct SweepPoint {
  double lambda = 0.0;
  Spin spin = Spin::minus;
  double eigenvalue = 0.0;              // lowest eigenvalue on the largest rung
  std::vector<double> rung_eigenvalues;
  SweepStatus status = SweepStatus::unresolved;
  double bound44 = 0.0;
  double lemma41_prediction = 0.0;
  std::optional<double> u;              // 2 / ln|eigenvalue| when resolved
};

struct SweepOptions {
  double c = 0.9;
  // relative change allowed between the last two rungs of a resolved point
  double rung_tolerance = 0.1;
  EigenOptions eigen;
};

struct WeakCouplingReport {
  double g = 0.0;
  double c = 0.9;
  GridSpec integral_grid;
  double gamma2 = 0.0;
  double gamma2_closed_form = 0.0;
  double a_squared_integral = 0.0;
  double green_identity_gap = 0.0;
  double boundary_term = 0.0;
  std::vector<GridSpec> ladder;
  std::vector<SweepPoint> lambda_sweep;  // lambda-major, spin plus before minus
  // over resolved points ordered by |lambda|: u < 0 and strictly decreasing
  bool u_negative = false;
  bool u_monotone = false;
  std::optional<double> u_slope;  // least-squares u = s lambda^2
};

double bound44(double lambda, double g, double a_squared, double c = 0.9);
double lemma41_prediction(double lambda, double gamma2);

// Integrals are taken on the largest ladder rung.
WeakCouplingReport lambda_sweep(const FieldDescriptor& f, double g,
                                const std::vector<double>& lambdas,
                                const std::vector<GridSpec>& ladder,
                                const SweepOptions& opt = {});

std::string sweep_csv(const WeakCouplingReport& r);

}  // namespace pauli2d
