#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pauli2d/grid.hpp"

namespace pauli2d {

enum class FieldKind {
  gaussian,            // B0 exp(-r^2 / 2 sigma^2)
  bump,                // B0 (1 - r^2/sigma^2)^3 on r < sigma
  power_tail,          // B0 (1 + r^2/sigma^2)^(-(2+delta)/2)
  angular_power_tail,  // B0 Re((z/sigma)^m) (1 + r^2/sigma^2)^(-(2+delta+m)/2)
  linear_combination,  // sum of weighted component fields
};

std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

struct FieldParams {
  double amplitude = 1.0;  // B0
  double sigma = 1.0;
  double delta = 2.0;      // declared tail exponent; informative for gaussian/bump
  int m = 0;               // angular harmonic index
  Point center{};          // r and z are measured from here
  double holder_eps = 1.0; // B in L^{1+eps}_loc; recorded, not enforced
};

class FieldDescriptor;

struct FieldTerm {
  double weight;
  std::shared_ptr<const FieldDescriptor> field;
};

// Immutable description of a magnetic field B: R^2 -> R.
class FieldDescriptor {
 public:
  static FieldDescriptor gaussian(double b0, double sigma, Point center = {});
  static FieldDescriptor bump(double b0, double sigma, Point center = {});
  static FieldDescriptor power_tail(double b0, double sigma, double delta,
                                    Point center = {});
  static FieldDescriptor angular_power_tail(double b0, double sigma,
                                            double delta, int m,
                                            Point center = {});
  static FieldDescriptor linear_combination(
      const std::vector<std::pair<double, FieldDescriptor>>& terms);
  // Validating constructor for the single-component kinds.
  static FieldDescriptor make(FieldKind kind, const FieldParams& p);

  FieldKind kind() const { return kind_; }
  const FieldParams& params() const { return params_; }
  const std::vector<FieldTerm>& terms() const { return terms_; }

  double operator()(double x, double y) const;
  double operator()(Point p) const { return (*this)(p.x, p.y); }

  // Closed-form flux (1/2pi) int B, when every component has one.
  std::optional<double> analytic_flux() const;

  // |B(x)| <= decay_constant() * (1 + |x|)^(-2 - decay_exponent()).
  double decay_exponent() const;
  double decay_constant() const;

  // Smallest length scale over the components.
  double min_scale() const;
  // Largest |center| + sigma over the components.
  double core_radius() const;
  bool is_radial() const;

 private:
  FieldKind kind_ = FieldKind::gaussian;
  FieldParams params_{};
  std::vector<FieldTerm> terms_;
};

struct FluxEstimate {
  double value = 0.0;
  double error = 0.0;  // quadrature error estimate plus tail bound
};

double evaluate(const FieldDescriptor& f, Point x);
std::optional<double> flux(const FieldDescriptor& f);
// Adaptive radial-angular quadrature of (1/2pi) int B.
FluxEstimate quadrature_flux(const FieldDescriptor& f, double tol = 1e-10);
// (1/2pi) times the integral of B over the square [-L, L]^2.
double flux_in_box(const FieldDescriptor& f, double L);
// Analytic flux when available, quadrature otherwise.
double total_flux(const FieldDescriptor& f);
ScalarGrid sample_to_grid(const FieldDescriptor& f, const GridSpec& grid);

}  // namespace pauli2d
