// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pauli2d/eigensolver.hpp"
#include "pauli2d/fields.hpp"
#include "pauli2d/logpotential.hpp"
#include "pauli2d/parallel.hpp"
#include "pauli2d/pauli2d.h"
#include "pauli2d/pauli_operator.hpp"
#include "pauli2d/variational.hpp"
#include "pauli2d/weak_coupling.hpp"

using namespace pauli2d;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

FieldDescriptor f25() { return FieldDescriptor::gaussian(2.5, 1.0); }

FieldDescriptor dog() {
  return FieldDescriptor::linear_combination(
      {{1.0, FieldDescriptor::gaussian(1, 1)}, {-1.0, FieldDescriptor::gaussian(0.25, 2)}});
}

// the F = 2.5 ladder is shared by the count and soundness criteria
StabilityReport& ladder_study() {
  static StabilityReport study = [] {
    EigenOptions opt;
    opt.k = 5;
    return count_stability_study(f25(), 3.0, Spin::minus, 1.0,
                                 {{20.0, 256}, {30.0, 384}, {40.0, 512}}, opt);
  }();
  return study;
}

Verdict bound_state_count() {
  const auto& s = ladder_study();
  std::ostringstream d;
  d << "counts";
  bool usable = true;
  for (std::size_t i = 0; i < s.rungs.size(); ++i) {
    d << (i ? "," : " ") << s.counts[i];
    usable = usable && s.rungs[i].usable_for_counting();
  }
  d << " on L=20/30/40, h=" << fmt("%.4f", s.rungs.back().grid.h())
    << ", lowest=" << fmt("%.6f", s.rungs.back().eigenvalues[0]);
  const bool ok = usable && s.stable && *s.stabilized_count >= 3;
  return {ok, d.str()};
}

Verdict certificate_soundness() {
  const auto& rung = ladder_study().rungs.front();
  std::ostringstream d;
  bool sound = rung.usable_for_counting();
  bool reached = false;
  d << "F=2.5 grid L=20 n=256 eigen count " << rung.negative_count << ", certified";
  for (double rho : {2.0, 3.0, 5.0, 7.5, 10.0}) {
    const auto c = certify_with_search(f25(), 3.0, rung.grid, 2, rho);
    d << " " << c.certified_count << "@" << rho;
    sound = sound && c.certified_count <= rung.negative_count;
    reached = reached || c.certified_count == 3;
  }
  struct Case {
    FieldDescriptor f;
    double g;
    int N;
    const char* name;
  };
  const std::vector<Case> more{{FieldDescriptor::gaussian(1, 1), 4.0, 0, "gauss(1,1) g=4"},
                               {FieldDescriptor::power_tail(1.5, 1, 1), 3.0, 1, "tail F=1.5 g=3"},
                               {FieldDescriptor::gaussian(0, 1), 3.0, 1, "zero field"}};
  for (const auto& c : more) {
    const GridSpec g{16.0, 128};
    EigenOptions opt;
    opt.k = c.N + 4;
    const auto s = lowest_eigenpairs(PauliOperator(c.f, g, c.g, Spin::minus), opt);
    sound = sound && s.usable_for_counting();
    d << "; " << c.name << " eigen " << s.negative_count << " certified";
    for (double rho : {2.0, 4.0, 8.0}) {
      const auto cert = certify_with_search(c.f, c.g, g, c.N, rho);
      d << " " << cert.certified_count;
      sound = sound && cert.certified_count <= s.negative_count;
    }
  }
  return {sound && reached, d.str()};
}

double radial_oracle_deviation(int n) {
  const auto phi = potential_grid(FieldDescriptor::gaussian(1, 1), {20.0, n});
  const GridSpec& g = phi.spec;
  const int stride = n / 128;
  double worst = 0.0;
  for (int j = 0; j < n; j += stride)
    for (int i = 0; i < n; i += stride) {
      const Point p = g.node(i, j);
      const double ref = oracle::radial_potential([](double t) { return std::exp(-t * t / 2); },
                                                  std::hypot(p.x, p.y), 40.0);
      worst = std::max(worst, std::abs(phi(i, j) - ref));
    }
  return worst;
}

Verdict radial_oracle() {
  const double a = radial_oracle_deviation(256), b = radial_oracle_deviation(512);
  return {a < 5e-3 && a / b >= 3.0,
          "max deviation " + fmt("%.3e", a) + " (n=256), " + fmt("%.3e", b) + " (n=512), ratio " +
              fmt("%.2f", a / b)};
}

Verdict growth_asymptotics() {
  const auto r = asymptotics_probe(FieldDescriptor::power_tail(1, 1, 1), {10, 30, 100}, 64);
  std::ostringstream d;
  d << "max |phi - F ln r|/ln r at r=10,30,100:";
  for (double v : r.max_relative_deviation) d << " " << fmt("%.4e", v);
  return {r.deviation_decreasing && r.max_relative_deviation.back() < 0.05, d.str()};
}

Verdict gradient_decay() {
  const auto wide = FieldDescriptor::linear_combination(
      {{1.0, FieldDescriptor::gaussian(1, 10)}, {-1.0, FieldDescriptor::gaussian(0.25, 20)}});
  std::vector<double> radii;
  for (int k = 0; k < 9; ++k) radii.push_back(10.0 * std::pow(10.0, k / 8.0));
  const auto r = asymptotics_probe(wide, radii, 16);
  if (!r.gradient_exponent_fit) return {false, "no gradient fit"};
  return {*r.gradient_exponent_fit <= -1.2,
          "fitted exponent " + fmt("%.3f", *r.gradient_exponent_fit) +
              " over r in [10,100] for gauss(1,10) - gauss(0.25,20)"};
}

Verdict supersymmetry() {
  const std::vector<FieldDescriptor> fields{
      f25(), dog(), FieldDescriptor::angular_power_tail(1.5, 1, 1, 2, {0.5, -0.3})};
  std::mt19937_64 rng(20240611);
  double worst = 0.0;
  for (const auto& f : fields) {
    const PauliOperator op(f, {8.0, 96}, 3.0, Spin::minus);
    for (int t = 0; t < 50; ++t) {
      const auto u = oracle::smooth_state(op.grid(), rng);
      const double lhs =
          op.quadrature_norm_squared(op.apply_d(u)) + 2.0 * op.field_form(u, u).real();
      const double rhs = op.quadrature_norm_squared(op.apply_d_adjoint(u));
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
  }
  return {worst <= 1e-8, "max relative gap " + fmt("%.2e", worst) + " over 150 states"};
}

Verdict gamma2_agreement() {
  const auto gb = FieldDescriptor::linear_combination(
      {{1.0, FieldDescriptor::gaussian(1, 1)}, {-1.0, FieldDescriptor::bump(2, 2)}});
  std::ostringstream d;
  bool ok = true;
  const std::vector<std::pair<const char*, FieldDescriptor>> fields{{"DoG", dog()},
                                                                    {"gauss-bump", gb}};
  for (const auto& [name, f] : fields) {
    const auto r = gamma2_paths(f, 3.0, {16.0, 512});
    ok = ok && r.relative_gap < 1e-3;
    d << name << " gap " << fmt("%.2e", r.relative_gap) << " gamma2(g=2.5,3,4)";
    for (double g : {2.5, 3.0, 4.0}) {
      const double v = gamma2(f, g, Spin::minus, {16.0, 256});
      ok = ok && v < 0.0;
      d << " " << fmt("%.4f", v);
    }
    d << "; ";
  }
  return {ok, d.str()};
}

Verdict weak_coupling_existence() {
  const auto pair = FieldDescriptor::linear_combination(
      {{1.0, FieldDescriptor::gaussian(1.5, 1, {1.5, 0})},
       {-1.0, FieldDescriptor::gaussian(1.5, 1, {-1.5, 0})}});
  SweepOptions opt;
  opt.eigen.k = 2;
  const auto r = lambda_sweep(pair, 3.0, {0.5, 0.7, 0.9, 1.2}, {{12.0, 96}, {16.0, 128}}, opt);
  std::ostringstream d;
  bool ok = r.gamma2 < 0.0;
  int resolved = 0;
  for (const auto& p : r.lambda_sweep) {
    if (p.status != SweepStatus::resolved) continue;
    ++resolved;
    ok = ok && p.eigenvalue < 0.0;
    if (p.spin == Spin::minus) d << "l=" << p.lambda << ":" << fmt("%.5f", p.eigenvalue) << " ";
  }
  ok = ok && resolved > 0 && r.u_negative && r.u_monotone;
  d << "resolved " << resolved << "/" << r.lambda_sweep.size() << ", u<0 " << r.u_negative
    << ", monotone " << r.u_monotone << ", gamma2 " << fmt("%.4f", r.gamma2);
  return {ok, d.str()};
}

Verdict dense_oracle() {
  const std::vector<FieldDescriptor> fields{
      f25(), dog(), FieldDescriptor::angular_power_tail(1.5, 1, 1, 1, {0.2, 0.1})};
  EigenOptions opt;
  opt.k = 6;
  opt.tolerance = 1e-11;
  double worst = 0.0;
  bool ok = true;
  for (const auto& f : fields)
    for (int n : {16, 24}) {
      const PauliOperator op(f, {3.0, n}, 3.0, Spin::minus);
      const auto s = lowest_eigenpairs(op, opt);
      ok = ok && s.converged;
      const auto e = oracle::dense_eigenvalues(op);
      for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        worst = std::max(worst, std::abs(s.eigenvalues[i] - e[i]));
    }
  return {ok && worst < 1e-8, "max |iterative - dense| " + fmt("%.2e", worst) + " (n=16,24)"};
}

Verdict flux_and_zero_modes() {
  const std::vector<FieldDescriptor> fields{
      FieldDescriptor::gaussian(1, 1), FieldDescriptor::bump(2, 2),
      FieldDescriptor::power_tail(1, 1, 1), FieldDescriptor::angular_power_tail(1, 1, 1, 0),
      FieldDescriptor::angular_power_tail(1, 1, 1, 2), dog()};
  double flux_gap = 0.0;
  for (const auto& f : fields)
    flux_gap = std::max(flux_gap, std::abs(quadrature_flux(f).value - *flux(f)) /
                                      std::max(1.0, std::abs(*flux(f))));
  std::ostringstream d;
  d << "max flux gap " << fmt("%.2e", flux_gap) << "; residual orders";
  double min_order = 1e300;
  for (int j : {0, 1, 2}) {
    std::vector<double> res;
    for (int n : {64, 128, 256}) {
      const GridSpec g{6.0, n};
      const PauliOperator op(f25(), g, 3.0, Spin::minus);
      res.push_back(op.annihilation_residual(ac_state(potential_grid(f25(), g), j), n / 16));
    }
    for (std::size_t k = 1; k < res.size(); ++k) {
      const double order = std::log2(res[k - 1] / res[k]);
      min_order = std::min(min_order, order);
      d << " " << fmt("%.2f", order);
    }
  }
  return {flux_gap <= 1e-6 && min_order >= 1.9, d.str()};
}

}  // namespace

int main() {
  set_max_threads(0);
  p2d_set_log_level("warn");
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"bound-state count", bound_state_count},
      {"certificate soundness", certificate_soundness},
      {"radial potential oracle", radial_oracle},
      {"logarithmic growth", growth_asymptotics},
      {"zero-flux gradient decay", gradient_decay},
      {"supersymmetry identity", supersymmetry},
      {"gamma2 two-path agreement", gamma2_agreement},
      {"weak-coupling bound states", weak_coupling_existence},
      {"dense solver oracle", dense_oracle},
      {"flux and zero-mode checks", flux_and_zero_modes}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
