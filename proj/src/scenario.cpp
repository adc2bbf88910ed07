#include "pauli2d/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include "format.hpp"
#include "pauli2d/eigensolver.hpp"
#include "pauli2d/error.hpp"
#include "pauli2d/logpotential.hpp"
#include "pauli2d/pauli_operator.hpp"
#include "pauli2d/variational.hpp"
#include "pauli2d/weak_coupling.hpp"

namespace pauli2d {

namespace {

using detail::fmt_double;

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json opt_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json grid_json(const GridSpec& g) { return Json{{"L", g.L}, {"n", g.n}, {"h", g.h()}}; }

Json matrix_json(const std::vector<cplx>& m) {
  Json a = Json::array();
  for (const auto& z : m) a.push_back(Json::array({z.real(), z.imag()}));
  return a;
}

const GridSpec& require_grid(const ScenarioConfig& c, const char* task) {
  if (!c.grid) throw ConfigError(std::string(task) + ": config needs a 'grid' block");
  return *c.grid;
}

Json spectrum_json(const SpectrumReport& s) {
  return Json{{"grid", grid_json(s.grid)},
              {"g", s.g},
              {"spin", to_string(s.spin)},
              {"lambda", s.lambda},
              {"tolerance", s.tolerance},
              {"count_threshold", s.count_threshold},
              {"predicted_lower_bound", opt_json(s.predicted_lower_bound)},
              {"eigenvalues", s.eigenvalues},
              {"residuals", s.residuals},
              {"norm_estimate", s.norm_estimate},
              {"negative_count", s.negative_count},
              {"count_saturated", s.count_saturated},
              {"converged", s.converged},
              {"iterations", s.iterations},
              {"matvecs", s.matvecs}};
}

std::string spectrum_csv(const SpectrumReport& s) {
  std::string out = "index,eigenvalue,residual\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    out += std::to_string(i) + "," + fmt_double(s.eigenvalues[i]) + "," +
           fmt_double(s.residuals[i]) + "\n";
  return out;
}

Json certificate_json(const CertificateReport& c) {
  Json sweep = Json::array();
  for (const auto& [slack, bound] : c.tail_bound_sweep)
    sweep.push_back(Json{{"epsilon_slack", slack}, {"bound", bound}});
  return Json{{"rho", c.rho},
              {"N", c.N},
              {"epsilon_h", c.epsilon_h},
              {"h_radius", c.h_radius},
              {"g", c.g},
              {"flux", c.flux},
              {"form_matrix", matrix_json(c.form_matrix)},
              {"gram_matrix", matrix_json(c.gram_matrix)},
              {"generalized_eigenvalues", c.generalized_eigenvalues},
              {"margin", c.margin},
              {"certified_count", c.certified_count},
              {"tail_bound", opt_json(c.tail_bound_value)},
              {"epsilon_slack", opt_json(c.epsilon_slack)},
              {"tail_bound_sweep", sweep},
              {"beta_estimate", c.beta_estimate}};
}

struct Outcome {
  Json result;
  std::vector<Artifact> artifacts;
  bool failure = false;
  std::string message;
};

Outcome run_fields(const ScenarioConfig& c) {
  const GridSpec& grid = require_grid(c, "fields");
  Outcome o;
  const auto analytic = flux(c.field);
  const FluxEstimate q = quadrature_flux(c.field);
  Json r;
  r["kind"] = to_string(c.field.kind());
  r["analytic_flux"] = opt_json(analytic);
  r["quadrature_flux"] = Json{{"value", q.value}, {"error", q.error}};
  if (analytic) {
    const double rel = std::abs(q.value - *analytic) / std::max(1.0, std::abs(*analytic));
    r["flux_relative_gap"] = rel;
    r["flux_agreement"] = rel <= 1e-6;
    if (rel > 1e-6) {
      o.failure = true;
      o.message = "quadrature flux disagrees with the analytic flux";
    }
  }
  r["flux_in_box"] = flux_in_box(c.field, grid.L);
  r["decay_exponent"] = c.field.decay_exponent();
  r["decay_constant"] = c.field.decay_constant();
  r["value_at_origin"] = evaluate(c.field, {0.0, 0.0});
  r["grid"] = grid_json(grid);
  o.result = r;
  o.artifacts.push_back({"field.csv", to_csv(sample_to_grid(c.field, grid))});
  return o;
}

Outcome run_potential(const ScenarioConfig& c) {
  const GridSpec& grid = require_grid(c, "potential");
  Outcome o;
  const ScalarGrid phi = potential_grid(c.field, grid);
  const VectorGrid a = vector_potential(phi);
  const auto [lo, hi] = std::minmax_element(phi.values.begin(), phi.values.end());
  // independent pointwise check on nodes along the diagonal
  Json samples = Json::array();
  double worst = 0.0;
  const int m = c.check_samples;
  for (int s = 0; s < m; ++s) {
    const int i = m == 1 ? grid.n / 2 : static_cast<int>(std::lround(s * (grid.n - 1.0) / (m - 1)));
    const Point x = grid.node(i, i);
    const double ref = potential_at(c.field, x);
    const double val = phi.values[grid.index(i, i)];
    worst = std::max(worst, std::abs(val - ref));
    samples.push_back(Json{{"x", x.x}, {"y", x.y}, {"grid", val}, {"pointwise", ref}});
  }
  o.result = Json{{"grid", grid_json(grid)},
                  {"flux", total_flux(c.field)},
                  {"phi_min", *lo},
                  {"phi_max", *hi},
                  {"pointwise_samples", samples},
                  {"max_pointwise_deviation", worst}};
  o.artifacts.push_back({"phi.csv", to_csv(phi)});
  o.artifacts.push_back({"A.csv", to_csv(a)});
  return o;
}

Outcome run_spectrum(const ScenarioConfig& c) {
  Outcome o;
  const SpectrumReport* last = nullptr;
  StabilityReport study;
  SpectrumReport single;
  if (!c.eigen_ladder.empty()) {
    study = count_stability_study(c.field, c.g, c.spin, c.lambda, c.eigen_ladder, c.eigen);
    Json rungs = Json::array();
    for (const auto& s : study.rungs) rungs.push_back(spectrum_json(s));
    o.result = Json{{"ladder", rungs},
                    {"counts", study.counts},
                    {"stable", study.stable},
                    {"stabilized_count", opt_json(study.stabilized_count)},
                    {"predicted_lower_bound", opt_json(study.predicted_lower_bound)}};
    last = &study.rungs.back();
  } else {
    const GridSpec& grid = require_grid(c, "spectrum");
    PauliOperator op(c.field, grid, c.g, c.spin, c.lambda);
    single = lowest_eigenpairs(op, c.eigen);
    single.predicted_lower_bound =
        predicted_lower_bound(total_flux(c.field), c.g, c.spin, c.lambda);
    o.result = spectrum_json(single);
    last = &single;
  }
  o.result["negative_count"] = last->negative_count;
  o.artifacts.push_back({"spectrum.csv", spectrum_csv(*last)});
  if (!last->converged) {
    o.failure = true;
    o.message = "eigensolver did not reach the requested tolerance";
  }
  return o;
}

Outcome run_certify(const ScenarioConfig& c) {
  const GridSpec& grid = require_grid(c, "certify");
  if (c.certify.rho.empty()) throw ConfigError("certify: config needs a 'certify' block");
  Outcome o;
  const double F = total_flux(c.field);
  Json certs = Json::array();
  std::string csv = "rho,certified_count,beta_estimate,tail_bound,epsilon_h\n";
  int best = 0;
  for (double rho : c.certify.rho) {
    CertificateReport rep;
    if (c.certify.search) {
      rep = certify_with_search(c.field, c.g, grid, c.certify.N, rho);
    } else {
      TrialBasis basis = build_trial_basis(c.field, grid, c.certify.N, rho, c.certify.epsilon_h,
                                           c.certify.h_radius.value_or(0.0));
      rep = certify(c.field, c.g, basis);
    }
    spdlog::info("certify rho={}: certified_count={}", rho, rep.certified_count);
    best = std::max(best, rep.certified_count);
    certs.push_back(certificate_json(rep));
    csv += fmt_double(rho) + "," + std::to_string(rep.certified_count) + "," +
           fmt_double(rep.beta_estimate) + "," +
           (rep.tail_bound_value ? fmt_double(*rep.tail_bound_value) : std::string()) + "," +
           fmt_double(rep.epsilon_h) + "\n";
  }
  o.result = Json{{"grid", grid_json(grid)},
                  {"flux", F},
                  {"g", c.g},
                  {"N", c.certify.N},
                  {"target_count", c.certify.N + 1},
                  {"certificates", certs},
                  {"best_certified_count", best}};
  if (c.certify.cross_check) {
    EigenOptions eo = c.eigen;
    eo.k = std::max(eo.k, c.certify.N + 3);
    PauliOperator op(c.field, grid, c.g, Spin::minus, 1.0);
    const SpectrumReport s = lowest_eigenpairs(op, eo);
    const bool sound = best <= s.negative_count;
    o.result["cross_check"] = Json{{"negative_count", s.negative_count},
                                   {"converged", s.converged},
                                   {"eigenvalues", s.eigenvalues},
                                   {"sound", sound}};
    if (!s.converged || !sound) {
      o.failure = true;
      o.message = s.converged ? "certified count exceeds the eigensolver count"
                              : "cross-check eigensolver did not converge";
    }
  }
  o.artifacts.push_back({"certify.csv", csv});
  return o;
}

Outcome run_weak(const ScenarioConfig& c) {
  if (c.sweep.ladder.empty()) throw ConfigError("weak: config needs a 'sweep' block");
  Outcome o;
  SweepOptions so;
  so.c = c.sweep.c;
  so.rung_tolerance = c.sweep.rung_tolerance;
  so.eigen = c.eigen;
  const WeakCouplingReport w = lambda_sweep(c.field, c.g, c.sweep.lambdas, c.sweep.ladder, so);
  const GreenIdentityReport gi = green_identity_check(c.field, w.integral_grid);
  Json pts = Json::array();
  for (const auto& p : w.lambda_sweep)
    pts.push_back(Json{{"lambda", p.lambda},
                       {"spin", to_string(p.spin)},
                       {"eigenvalue", p.eigenvalue},
                       {"rung_eigenvalues", p.rung_eigenvalues},
                       {"status", to_string(p.status)},
                       {"bound44", p.bound44},
                       {"lemma41_prediction", p.lemma41_prediction},
                       {"u", opt_json(p.u)}});
  Json ladder = Json::array();
  for (const auto& g : w.ladder) ladder.push_back(grid_json(g));
  o.result = Json{{"g", w.g},
                  {"c", w.c},
                  {"integral_grid", grid_json(w.integral_grid)},
                  {"gamma2", w.gamma2},
                  {"gamma2_closed_form", w.gamma2_closed_form},
                  {"gamma2_relative_gap",
                   w.gamma2_closed_form != 0.0
                       ? std::abs(w.gamma2 - w.gamma2_closed_form) / std::abs(w.gamma2_closed_form)
                       : 0.0},
                  {"a_squared_integral", w.a_squared_integral},
                  {"green_identity_gap", w.green_identity_gap},
                  {"boundary_term", gi.boundary_term},
                  {"ladder", ladder},
                  {"lambda_sweep", pts},
                  {"u_negative", w.u_negative},
                  {"u_monotone", w.u_monotone},
                  {"u_slope", opt_json(w.u_slope)}};
  o.artifacts.push_back({"sweep.csv", sweep_csv(w)});
  return o;
}

Outcome run_asymptotics(const ScenarioConfig& c) {
  Outcome o;
  const std::vector<double> radii = c.radii.empty() ? std::vector<double>{10, 30, 100} : c.radii;
  const AsymptoticsReport a = asymptotics_probe(c.field, radii, c.angles);
  o.result = Json{{"flux", a.flux},
                  {"zero_flux", a.zero_flux},
                  {"radii", a.radii},
                  {"angles", c.angles},
                  {"max_relative_deviation", a.max_relative_deviation},
                  {"deviation_decreasing", a.deviation_decreasing},
                  {"max_gradient", a.max_gradient},
                  {"gradient_exponent_fit", opt_json(a.gradient_exponent_fit)}};
  std::string csv = "r,max_relative_deviation,max_gradient\n";
  for (std::size_t i = 0; i < a.radii.size(); ++i)
    csv += fmt_double(a.radii[i]) + "," +
           (a.zero_flux ? std::string() : fmt_double(a.max_relative_deviation[i])) + "," +
           (i < a.max_gradient.size() ? fmt_double(a.max_gradient[i]) : std::string()) + "\n";
  o.artifacts.push_back({"asymptotics.csv", csv});
  return o;
}

// Invariant suite on a small grid derived from the config.
Outcome run_check(const ScenarioConfig& c) {
  Outcome o;
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Json checks = Json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool pass, double value, double limit) {
    checks.push_back(Json{{"name", name}, {"pass", pass}, {"value", value}, {"limit", limit}});
    all = all && pass;
  };

  // decay envelope at random points
  {
    const double d = c.field.decay_exponent(), C = c.field.decay_constant();
    double worst = 0.0;
    for (int s = 0; s < 200; ++s) {
      const double r = std::exp(std::log(100.0) * (unit(rng) + 1.0) / 2.0) - 1.0;
      const double t = M_PI * unit(rng);
      const double b = std::abs(c.field(r * std::cos(t), r * std::sin(t)));
      worst = std::max(worst, b / (C * std::pow(1.0 + r, -2.0 - d)));
    }
    record("decay_envelope", worst <= 1.0 + 1e-12, worst, 1.0);
  }
  // analytic vs quadrature flux
  if (const auto a = flux(c.field)) {
    const double gap = std::abs(quadrature_flux(c.field).value - *a) / std::max(1.0, std::abs(*a));
    record("flux_agreement", gap <= 1e-6, gap, 1e-6);
  }

  const double L = c.grid ? std::min(c.grid->L, 8.0) : 8.0;
  const GridSpec small{L, 24};
  const PauliOperator op(c.field, small, c.g, c.spin, c.lambda);
  auto random_state = [&]() {
    ComplexGrid u(small);
    for (int j = 0; j < small.n; ++j)
      for (int i = 0; i < small.n; ++i) {
        const Point p = small.node(i, j);
        const double w = std::cos(M_PI * p.x / (2 * L)) * std::cos(M_PI * p.y / (2 * L));
        u.values[small.index(i, j)] = w * cplx(normal(rng), normal(rng));
      }
    return u;
  };
  // Hermitian symmetry and form consistency
  {
    double herm = 0.0, form = 0.0, susy = 0.0;
    for (int s = 0; s < c.check_samples; ++s) {
      const ComplexGrid u = random_state(), v = random_state();
      const ComplexGrid hu = op.apply_hamiltonian(u), hv = op.apply_hamiltonian(v);
      const cplx a = inner(u, hv), b = std::conj(inner(v, hu));
      herm = std::max(herm, std::abs(a - b) / std::max(1e-300, std::abs(a)));
      const double e = op.energy_form(u), q = inner(u, hu).real();
      form = std::max(form, std::abs(e - q) / std::max(1e-300, std::abs(q)));
      // D*D + 2 lambda B = D D* in form sense
      const double lhs = op.quadrature_norm_squared(op.apply_d(u)) +
                         2.0 * op.field_form(u, u).real();
      const double rhs = op.quadrature_norm_squared(op.apply_d_adjoint(u));
      susy = std::max(susy, std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs)));
    }
    record("hermitian_symmetry", herm <= 1e-10, herm, 1e-10);
    record("energy_form_consistency", form <= 1e-10, form, 1e-10);
    record("supersymmetry_identity", susy <= 1e-8, susy, 1e-8);
  }
  // iterative vs dense eigenvalues
  {
    const auto dense = op.dense_matrix();
    const Eigen::Index N = static_cast<Eigen::Index>(op.dimension());
    Eigen::MatrixXcd M(N, N);
    for (Eigen::Index r = 0; r < N; ++r)
      for (Eigen::Index k = 0; k < N; ++k) M(r, k) = dense[r * N + k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    EigenOptions eo = c.eigen;
    eo.k = std::min(eo.k, 6);
    eo.tolerance = std::min(eo.tolerance, 1e-10);
    const SpectrumReport s = lowest_eigenpairs(op, eo);
    double gap = 0.0;
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
      gap = std::max(gap, std::abs(s.eigenvalues[i] - es.eigenvalues()(static_cast<Eigen::Index>(i))));
    record("dense_eigenvalue_agreement", s.converged && gap <= 1e-8, gap, 1e-8);
  }
  // grid potential vs pointwise quadrature at a few interior nodes
  {
    const ScalarGrid phi = potential_grid(c.field, small);
    double worst = 0.0;
    for (int s = 0; s < 3; ++s) {
      const int i = small.n / 4 + s * small.n / 4;
      const Point x = small.node(i, small.n - 1 - i);
      worst = std::max(worst, std::abs(phi.values[small.index(i, small.n - 1 - i)] -
                                       potential_at(c.field, x)));
    }
    record("potential_pointwise", worst <= 5e-2, worst, 5e-2);
  }
  o.result = Json{{"grid", grid_json(small)}, {"checks", checks}, {"all_passed", all}};
  if (!all) {
    o.failure = true;
    o.message = "one or more invariant checks failed";
  }
  return o;
}

}  // namespace

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{"fields", "potential", "spectrum", "certify",
                                              "weak",   "asymptotics", "check"};
  return names;
}

TaskResult run_task(const std::string& task, const ScenarioConfig& cfg) {
  Outcome o;
  if (task == "fields") o = run_fields(cfg);
  else if (task == "potential") o = run_potential(cfg);
  else if (task == "spectrum") o = run_spectrum(cfg);
  else if (task == "certify") o = run_certify(cfg);
  else if (task == "weak") o = run_weak(cfg);
  else if (task == "asymptotics") o = run_asymptotics(cfg);
  else if (task == "check") o = run_check(cfg);
  else throw ConfigError("unknown task '" + task + "'");
  TaskResult r;
  r.report = Json{{"task", task},
                  {"version", kVersion},
                  {"config", scenario_to_json(cfg)},
                  {"status", Json{{"ok", !o.failure}, {"message", o.message}}},
                  {"result", std::move(o.result)}};
  r.report_name = task + ".json";
  r.artifacts = std::move(o.artifacts);
  r.numerical_failure = o.failure;
  return r;
}

std::string report_text(const TaskResult& r) { return detail::dump_json(r.report) + "\n"; }

}  // namespace pauli2d
