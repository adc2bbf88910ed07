#include "pauli2d/weak_coupling.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "format.hpp"
#include "pauli2d/error.hpp"
#include "pauli2d/logpotential.hpp"

namespace pauli2d {

namespace {

constexpr double kPi = std::numbers::pi;

void require_zero_flux(const FieldDescriptor& f) {
  auto F = f.analytic_flux();
  if (!F || *F != 0.0)
    throw DomainError("weak-coupling quantities need a field with zero total flux");
}

struct Integrals {
  double a2 = 0.0, phib = 0.0, boundary = 0.0;
};

Integrals grid_integrals(const FieldDescriptor& f, const GridSpec& grid) {
  grid.validate();
  ScalarGrid phi = potential_grid(f, grid);
  VectorGrid A = vector_potential(phi);
  ScalarGrid B = sample_to_grid(f, grid);
  const double h = grid.h();
  const int n = grid.n;
  Integrals out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.a2 += A.x[k] * A.x[k] + A.y[k] * A.y[k];
    out.phib += phi.values[k] * B.values[k];
  }
  out.a2 *= h * h;
  out.phib *= h * h;
  // grad phi = (A2, -A1); outward normals on the four edges.
  double s = 0.0;
  for (int t = 0; t < n; ++t) {
    std::size_t r = grid.index(n - 1, t), l = grid.index(0, t);
    std::size_t top = grid.index(t, n - 1), bot = grid.index(t, 0);
    s += phi.values[r] * A.y[r] - phi.values[l] * A.y[l];
    s += -phi.values[top] * A.x[top] + phi.values[bot] * A.x[bot];
  }
  out.boundary = s * h;
  return out;
}

}  // namespace

std::string to_string(SweepStatus s) {
  switch (s) {
    case SweepStatus::resolved: return "resolved";
    case SweepStatus::unresolved: return "unresolved";
    case SweepStatus::not_converged: return "not_converged";
  }
  return "unknown";
}

Gamma2Result gamma2_paths(const FieldDescriptor& f, double g, const GridSpec& grid) {
  require_zero_flux(f);
  if (!std::isfinite(g)) throw ConfigError("g must be finite");
  Integrals I = grid_integrals(f, grid);
  Gamma2Result r;
  r.a_squared = I.a2;
  r.phi_b = I.phib;
  r.gamma2 = I.a2 / (2.0 * kPi) + 0.25 * g * g * I.phib / (2.0 * kPi);
  r.closed_form = -(g * g - 4.0) / (8.0 * kPi) * I.a2;
  r.relative_gap = r.closed_form != 0.0
                       ? std::abs(r.gamma2 - r.closed_form) / std::abs(r.closed_form)
                       : std::abs(r.gamma2);
  return r;
}

double gamma2(const FieldDescriptor& f, double g, Spin, const GridSpec& grid) {
  return gamma2_paths(f, g, grid).gamma2;
}

GreenIdentityReport green_identity_check(const FieldDescriptor& f, const GridSpec& grid) {
  require_zero_flux(f);
  Integrals I = grid_integrals(f, grid);
  GreenIdentityReport r;
  r.a_squared = I.a2;
  r.phi_b = I.phib;
  r.boundary_term = I.boundary;
  r.relative_gap = I.a2 != 0.0 ? std::abs(I.a2 + I.phib) / I.a2 : std::abs(I.phib);
  return r;
}

double bound44(double lambda, double g, double a_squared, double c) {
  double q = c * lambda * lambda * (g * g - 4.0) * a_squared / (16.0 * kPi);
  if (!(q > 0.0)) return 0.0;
  return -std::exp(-1.0 / q);
}

double lemma41_prediction(double lambda, double gamma2) {
  double u = gamma2 * lambda * lambda;
  if (!(u < 0.0)) return 0.0;
  return -std::exp(2.0 / u);
}

WeakCouplingReport lambda_sweep(const FieldDescriptor& f, double g,
                                const std::vector<double>& lambdas,
                                const std::vector<GridSpec>& ladder,
                                const SweepOptions& opt) {
  require_zero_flux(f);
  if (!(g > 2.0)) throw DomainError("lambda sweep needs g > 2");
  if (ladder.empty()) throw ConfigError("sweep.ladder must not be empty");
  if (lambdas.empty()) throw ConfigError("sweep.lambdas must not be empty");
  for (double l : lambdas)
    if (!std::isfinite(l)) throw ConfigError("sweep.lambdas must be finite");
  opt.eigen.validate();

  WeakCouplingReport rep;
  rep.g = g;
  rep.c = opt.c;
  rep.ladder = ladder;
  rep.integral_grid = ladder.back();
  Gamma2Result g2 = gamma2_paths(f, g, rep.integral_grid);
  GreenIdentityReport green = green_identity_check(f, rep.integral_grid);
  rep.gamma2 = g2.gamma2;
  rep.gamma2_closed_form = g2.closed_form;
  rep.a_squared_integral = g2.a_squared;
  rep.green_identity_gap = green.relative_gap;
  rep.boundary_term = green.boundary_term;

  std::vector<ScalarGrid> potentials;
  for (const auto& grid : ladder) {
    grid.validate();
    potentials.push_back(potential_grid(f, PauliOperator::extended_grid(grid)));
  }

  for (double lambda : lambdas)
    for (Spin spin : {Spin::plus, Spin::minus}) {
      SweepPoint pt;
      pt.lambda = lambda;
      pt.spin = spin;
      pt.bound44 = bound44(lambda, g, rep.a_squared_integral, opt.c);
      pt.lemma41_prediction = lemma41_prediction(lambda, rep.gamma2);
      bool converged = true;
      std::vector<ComplexGrid> warm;
      for (std::size_t r = 0; r < ladder.size(); ++r) {
        PauliOperator op(potentials[r], ladder[r], g, spin, lambda);
        std::vector<ComplexGrid> seed;
        for (const auto& w : warm)
          if (nested_in(w.spec, ladder[r])) seed.push_back(embed(w, ladder[r]));
        SpectrumReport s = lowest_eigenpairs(op, opt.eigen, seed.empty() ? nullptr : &seed);
        converged = converged && s.converged;
        pt.rung_eigenvalues.push_back(s.eigenvalues.front());
        warm = std::move(s.eigenvectors);
      }
      pt.eigenvalue = pt.rung_eigenvalues.back();
      const double thr = opt.eigen.count_threshold;
      if (!converged) {
        pt.status = SweepStatus::not_converged;
      } else if (pt.eigenvalue < -thr) {
        bool settled = true;
        if (pt.rung_eigenvalues.size() >= 2) {
          double prev = pt.rung_eigenvalues[pt.rung_eigenvalues.size() - 2];
          settled = std::abs(pt.eigenvalue - prev) <= opt.rung_tolerance * std::abs(pt.eigenvalue);
        }
        pt.status = settled ? SweepStatus::resolved : SweepStatus::unresolved;
      } else {
        pt.status = SweepStatus::unresolved;
      }
      if (pt.status == SweepStatus::resolved && std::abs(pt.eigenvalue) != 1.0)
        pt.u = 2.0 / std::log(std::abs(pt.eigenvalue));
      spdlog::info("sweep lambda={} spin={}: {} ({})", lambda, to_string(spin), pt.eigenvalue,
                   to_string(pt.status));
      rep.lambda_sweep.push_back(std::move(pt));
    }

  // Trend of u(lambda) per spin over the resolved points.
  rep.u_negative = true;
  rep.u_monotone = true;
  double sxy = 0.0, sxx = 0.0;
  bool any = false;
  for (Spin spin : {Spin::plus, Spin::minus}) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : rep.lambda_sweep)
      if (p.spin == spin && p.u) pts.emplace_back(std::abs(p.lambda), *p.u);
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      any = true;
      if (!(pts[k].second < 0.0)) rep.u_negative = false;
      if (k > 0 && !(pts[k].second < pts[k - 1].second)) rep.u_monotone = false;
      double x = pts[k].first * pts[k].first;
      sxy += x * pts[k].second;
      sxx += x * x;
    }
  }
  if (!any) {
    rep.u_negative = false;
    rep.u_monotone = false;
  } else if (sxx > 0.0) {
    rep.u_slope = sxy / sxx;
  }
  return rep;
}

std::string sweep_csv(const WeakCouplingReport& r) {
  using detail::fmt_double;
  std::string out = "lambda,spin,eigenvalue,bound44,lemma41_prediction,status\n";
  for (const auto& p : r.lambda_sweep) {
    out += fmt_double(p.lambda) + "," + to_string(p.spin) + "," + fmt_double(p.eigenvalue) +
           "," + fmt_double(p.bound44) + "," + fmt_double(p.lemma41_prediction) + "," +
           to_string(p.status) + "\n";
  }
  return out;
}

}  // namespace pauli2d
