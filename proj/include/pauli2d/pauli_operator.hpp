#pragma once

#include <array>
#include <string>
#include <vector>

#include "pauli2d/fields.hpp"
#include "pauli2d/grid.hpp"

namespace pauli2d {

enum class Spin { plus, minus };

std::string to_string(Spin s);
Spin spin_from_string(const std::string& s);
inline double spin_sign(Spin s) { return s == Spin::plus ? 1.0 : -1.0; }

// Pauli Hamiltonian H = D*D + (2 +- g)/2 lambda B on the Dirichlet box,
// D = (p1 - A1) + i(p2 - A2), discretised with bilinear elements on the
// cell-centred nodes and 2x2 Gauss quadrature. A comes from the grid
// potential on the grid extended by one ghost ring; B at the Gauss points is
// the exact curl of the interpolated A, which keeps D*D and D D* consistent.
// H acts on nodal values with the lumped inner product h^2 sum conj(u) v.
class PauliOperator {
 public:
  PauliOperator(const FieldDescriptor& f, const GridSpec& grid, double g,
                Spin spin, double lambda = 1.0);
  // phi_ext must live on extended_grid(grid).
  PauliOperator(const ScalarGrid& phi_ext, const GridSpec& grid, double g,
                Spin spin, double lambda = 1.0);

  static GridSpec extended_grid(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double g() const { return g_; }
  Spin spin() const { return spin_; }
  double lambda() const { return lambda_; }
  // (2 +- g)/2
  double mu() const { return mu_; }
  std::size_t dimension() const { return grid_.size(); }

  // D psi and the formal adjoint D* psi at the Gauss points.
  QuadratureGrid apply_d(const ComplexGrid& psi) const;
  QuadratureGrid apply_d_adjoint(const ComplexGrid& psi) const;
  // Hilbert-space adjoint of apply_d: Gauss-point data back to the nodes.
  ComplexGrid apply_d_dagger(const QuadratureGrid& q) const;

  ComplexGrid apply_hamiltonian(const ComplexGrid& psi) const;
  // Raw form on n*n contiguous values.
  void apply_hamiltonian(const cplx* in, cplx* out) const;
  // m vectors stored node-major: value c of node r at [r * m + c].
  void apply_hamiltonian_block(const cplx* in, cplx* out, int m) const;
  // out = alpha (H - shift) in + beta extra, same layout; extra may be null.
  void apply_shifted_block(const cplx* in, cplx* out, int m, double shift, double alpha,
                           double beta, const cplx* extra) const;

  // <psi, H psi> = |D psi|^2 + mu int B |psi|^2, by Gauss quadrature.
  double energy_form(const ComplexGrid& psi) const;
  // int lambda B conj(u) v at the Gauss points.
  cplx field_form(const ComplexGrid& u, const ComplexGrid& v) const;
  // |u|^2 in the Gauss-point inner product.
  double quadrature_norm_squared(const QuadratureGrid& q) const;

  // |D chi| / |chi| with D taken as the element mean, skipping `margin`
  // cells along the boundary.
  double annihilation_residual(const ComplexGrid& chi, int margin) const;

  // Gershgorin bounds on the spectrum.
  double upper_bound() const;
  double lower_bound() const;

  // Row-major dense matrix of H; only for small grids.
  std::vector<cplx> dense_matrix() const;

  // lambda B at the 4 Gauss points of each element.
  const std::vector<double>& gauss_field() const { return b_gp_; }

 private:
  void build(const ScalarGrid& phi_ext);
  template <bool Adjoint>
  QuadratureGrid apply_first_order(const ComplexGrid& psi) const;

  GridSpec grid_;
  double g_;
  Spin spin_;
  double lambda_;
  double mu_;
  std::vector<cplx> a_gp_;    // lambda (A1 + i A2) at Gauss points
  std::vector<double> b_gp_;  // lambda B_h at Gauss points
  std::vector<std::array<cplx, 9>> stencil_;
};

}  // namespace pauli2d
