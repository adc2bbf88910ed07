#include "pauli2d/fields.hpp"

#include <cmath>
#include <numbers>

#include "pauli2d/error.hpp"
#include "pauli2d/parallel.hpp"
#include "quadrature.hpp"

namespace pauli2d {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

struct Leaf {
  double weight;
  const FieldDescriptor* field;
};

void collect_leaves(const FieldDescriptor& f, double w, std::vector<Leaf>& out) {
  if (f.kind() != FieldKind::linear_combination) {
    out.push_back({w, &f});
    return;
  }
  for (const auto& t : f.terms()) collect_leaves(*t.field, w * t.weight, out);
}

std::vector<Leaf> leaves(const FieldDescriptor& f) {
  std::vector<Leaf> out;
  collect_leaves(f, 1.0, out);
  return out;
}

// Re((z/sigma)^m) and |z/sigma|^2.
double harmonic(double zx, double zy, int m) {
  double re = 1.0, im = 0.0;
  for (int k = 0; k < m; ++k) {
    double nr = re * zx - im * zy;
    im = re * zy + im * zx;
    re = nr;
  }
  return re;
}

}  // namespace

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::gaussian: return "gaussian";
    case FieldKind::bump: return "bump";
    case FieldKind::power_tail: return "power_tail";
    case FieldKind::angular_power_tail: return "angular_power_tail";
    case FieldKind::linear_combination: return "linear_combination";
  }
  return "unknown";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "gaussian") return FieldKind::gaussian;
  if (s == "bump") return FieldKind::bump;
  if (s == "power_tail") return FieldKind::power_tail;
  if (s == "angular_power_tail") return FieldKind::angular_power_tail;
  if (s == "linear_combination") return FieldKind::linear_combination;
  throw ConfigError("unknown field kind '" + s + "'");
}

FieldDescriptor FieldDescriptor::make(FieldKind kind, const FieldParams& p) {
  if (kind == FieldKind::linear_combination)
    throw ConfigError("linear_combination is built from terms, not params");
  if (!std::isfinite(p.amplitude)) throw ConfigError("B0 must be finite");
  if (!finite_positive(p.sigma)) throw ConfigError("sigma must be positive");
  if (!finite_positive(p.delta)) throw ConfigError("delta must be positive");
  if (!finite_positive(p.holder_eps))
    throw ConfigError("holder_eps must be positive");
  if (!std::isfinite(p.center.x) || !std::isfinite(p.center.y))
    throw ConfigError("center must be finite");
  if (p.m < 0 || p.m > 64) throw ConfigError("m must be in [0, 64]");
  if (p.m != 0 && kind != FieldKind::angular_power_tail)
    throw ConfigError("m is only meaningful for angular_power_tail");
  FieldDescriptor f;
  f.kind_ = kind;
  f.params_ = p;
  return f;
}

FieldDescriptor FieldDescriptor::gaussian(double b0, double sigma, Point c) {
  FieldParams p;
  p.amplitude = b0;
  p.sigma = sigma;
  p.center = c;
  return make(FieldKind::gaussian, p);
}

FieldDescriptor FieldDescriptor::bump(double b0, double sigma, Point c) {
  FieldParams p;
  p.amplitude = b0;
  p.sigma = sigma;
  p.center = c;
  return make(FieldKind::bump, p);
}

FieldDescriptor FieldDescriptor::power_tail(double b0, double sigma,
                                            double delta, Point c) {
  FieldParams p;
  p.amplitude = b0;
  p.sigma = sigma;
  p.delta = delta;
  p.center = c;
  return make(FieldKind::power_tail, p);
}

FieldDescriptor FieldDescriptor::angular_power_tail(double b0, double sigma,
                                                    double delta, int m,
                                                    Point c) {
  FieldParams p;
  p.amplitude = b0;
  p.sigma = sigma;
  p.delta = delta;
  p.m = m;
  p.center = c;
  return make(FieldKind::angular_power_tail, p);
}

FieldDescriptor FieldDescriptor::linear_combination(
    const std::vector<std::pair<double, FieldDescriptor>>& terms) {
  if (terms.empty()) throw ConfigError("linear_combination needs terms");
  FieldDescriptor f;
  f.kind_ = FieldKind::linear_combination;
  for (const auto& [w, g] : terms) {
    if (!std::isfinite(w)) throw ConfigError("term weight must be finite");
    f.terms_.push_back({w, std::make_shared<const FieldDescriptor>(g)});
  }
  return f;
}

double FieldDescriptor::operator()(double x, double y) const {
  if (kind_ == FieldKind::linear_combination) {
    double s = 0.0;
    for (const auto& t : terms_) s += t.weight * (*t.field)(x, y);
    return s;
  }
  const auto& p = params_;
  double zx = (x - p.center.x) / p.sigma, zy = (y - p.center.y) / p.sigma;
  double u = zx * zx + zy * zy;
  switch (kind_) {
    case FieldKind::gaussian:
      return p.amplitude * std::exp(-0.5 * u);
    case FieldKind::bump: {
      if (u >= 1.0) return 0.0;
      double v = 1.0 - u;
      return p.amplitude * v * v * v;
    }
    case FieldKind::power_tail:
      return p.amplitude * std::pow(1.0 + u, -0.5 * (2.0 + p.delta));
    case FieldKind::angular_power_tail:
      return p.amplitude * harmonic(zx, zy, p.m) *
             std::pow(1.0 + u, -0.5 * (2.0 + p.delta + p.m));
    default:
      return 0.0;
  }
}

std::optional<double> FieldDescriptor::analytic_flux() const {
  const auto& p = params_;
  double s2 = p.sigma * p.sigma;
  switch (kind_) {
    case FieldKind::gaussian: return p.amplitude * s2;
    case FieldKind::bump: return p.amplitude * s2 / 8.0;
    case FieldKind::power_tail: return p.amplitude * s2 / p.delta;
    case FieldKind::angular_power_tail:
      return p.m == 0 ? p.amplitude * s2 / p.delta : 0.0;
    case FieldKind::linear_combination: {
      double s = 0.0;
      for (const auto& t : terms_) {
        auto v = t.field->analytic_flux();
        if (!v) return std::nullopt;
        s += t.weight * *v;
      }
      return s;
    }
  }
  return std::nullopt;
}

double FieldDescriptor::decay_exponent() const {
  if (kind_ != FieldKind::linear_combination) return params_.delta;
  double d = INFINITY;
  for (const auto& t : terms_) d = std::min(d, t.field->decay_exponent());
  return d;
}

double FieldDescriptor::decay_constant() const {
  if (kind_ == FieldKind::linear_combination) {
    double c = 0.0;
    for (const auto& t : terms_)
      c += std::abs(t.weight) * t.field->decay_constant();
    return c;
  }
  const auto& p = params_;
  // |x| <= a - 1 + s with s the distance to the centre.
  double a = 1.0 + std::hypot(p.center.x, p.center.y);
  double e = 2.0 + p.delta, s2 = p.sigma * p.sigma;
  switch (kind_) {
    case FieldKind::gaussian: {
      double s = 0.5 * (-a + std::sqrt(a * a + 4.0 * e * s2));
      return std::abs(p.amplitude) * std::pow(a + s, e) * std::exp(-0.5 * s * s / s2);
    }
    case FieldKind::bump:
      return std::abs(p.amplitude) * std::pow(a + p.sigma, e);
    default:
      // sup_s (a+s)^2 / (1 + s^2/sigma^2) = a^2 + sigma^2
      return std::abs(p.amplitude) * std::pow(a * a + s2, 0.5 * e);
  }
}

double FieldDescriptor::min_scale() const {
  if (kind_ != FieldKind::linear_combination) return params_.sigma;
  double s = INFINITY;
  for (const auto& t : terms_) s = std::min(s, t.field->min_scale());
  return s;
}

double FieldDescriptor::core_radius() const {
  if (kind_ != FieldKind::linear_combination)
    return std::hypot(params_.center.x, params_.center.y) + params_.sigma;
  double r = 0.0;
  for (const auto& t : terms_) r = std::max(r, t.field->core_radius());
  return r;
}

bool FieldDescriptor::is_radial() const {
  if (kind_ == FieldKind::linear_combination) {
    for (const auto& t : terms_)
      if (!t.field->is_radial()) return false;
    return true;
  }
  if (params_.center.x != 0.0 || params_.center.y != 0.0) return false;
  return params_.m == 0;
}

double evaluate(const FieldDescriptor& f, Point x) { return f(x); }

std::optional<double> flux(const FieldDescriptor& f) { return f.analytic_flux(); }

FluxEstimate quadrature_flux(const FieldDescriptor& f, double tol) {
  const double delta = f.decay_exponent();
  const double C = f.decay_constant();
  const auto parts = leaves(f);
  const double tail_budget = 1e-10;
  double R = std::pow(C / (delta * tail_budget), 1.0 / delta);
  R = std::max(R, 20.0 * f.core_radius());

  int mmax = 0;
  double scale = 0.0;  // flux magnitude of |B|, up to the tail factor
  std::vector<double> interior;
  for (const auto& l : parts) {
    const auto& p = l.field->params();
    mmax = std::max(mmax, p.m);
    scale += std::abs(l.weight * p.amplitude) * p.sigma * p.sigma;
    double rc = std::hypot(p.center.x, p.center.y);
    for (double k : {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0})
      interior.push_back(rc + k * p.sigma);
  }
  const bool radial = f.is_radial();
  const int apanels = std::max(8, 4 * mmax);

  auto ring = [&](double t) {
    if (radial) return kTwoPi * f(t, 0.0);
    double s = 0.0;
    for (int k = 0; k < apanels; ++k) {
      double a0 = kTwoPi * k / apanels, a1 = kTwoPi * (k + 1) / apanels;
      auto r = detail::gk([&](double a) { return f(t * std::cos(a), t * std::sin(a)); },
                          a0, a1, 1e-13, 10);
      s += r.value;
    }
    return s;
  };
  auto breaks = detail::radial_breaks(0.0, R, 0.25 * f.min_scale(), interior);
  // absolute floor so that fluxes that cancel exactly do not refine on noise
  auto res = detail::gk_panels([&](double t) { return t * ring(t); }, breaks, tol, 14,
                               1e-2 * tol * kTwoPi * scale);

  FluxEstimate out;
  out.value = res.value / kTwoPi;
  out.error = res.error / kTwoPi + C * std::pow(R, -delta) / delta;
  return out;
}

double flux_in_box(const FieldDescriptor& f, double L) {
  std::vector<double> bx{-L, L}, by{-L, L};
  double scale = 0.0;
  for (const auto& l : leaves(f)) {
    const auto& p = l.field->params();
    scale += std::abs(l.weight * p.amplitude) * p.sigma * p.sigma;
    for (double k : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
      double xs = p.center.x + k * p.sigma, ys = p.center.y + k * p.sigma;
      if (xs > -L && xs < L) bx.push_back(xs);
      if (ys > -L && ys < L) by.push_back(ys);
    }
  }
  auto row = [&](double y) {
    return detail::gk_panels([&](double x) { return f(x, y); }, bx, 1e-13, 12, 1e-15 * scale)
        .value;
  };
  // absolute floors keep cancelling (zero-flux) integrands from refining on noise
  return detail::gk_panels(row, by, 1e-12, 12, 1e-14 * kTwoPi * scale).value / kTwoPi;
}

double total_flux(const FieldDescriptor& f) {
  if (auto v = f.analytic_flux()) return *v;
  return quadrature_flux(f).value;
}

ScalarGrid sample_to_grid(const FieldDescriptor& f, const GridSpec& grid) {
  grid.validate();
  ScalarGrid out(grid);
  parallel_for(static_cast<std::size_t>(grid.n), [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j)
      for (int i = 0; i < grid.n; ++i)
        out(i, static_cast<int>(j)) = f(grid.node(i, static_cast<int>(j)));
  });
  return out;
}

}  // namespace pauli2d
