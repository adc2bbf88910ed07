#include "pauli2d/logpotential.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "pauli2d/error.hpp"
#include "pauli2d/parallel.hpp"
#include "quadrature.hpp"
#include "smoothstep.hpp"

namespace pauli2d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Partition of unity around the evaluation point: 1 for s <= rho/2,
// 0 for s >= rho, C-infinity in between so periodic sums converge fast.
double cutoff(double s, double rho) {
  return 1.0 - detail::smooth_transition(2.0 * s / rho - 1.0);
}

double tail_radius(const FieldDescriptor& f, double xnorm, double budget) {
  double C = f.decay_constant(), d = f.decay_exponent();
  double R = std::max(1.0, 20.0 * f.core_radius());
  for (int it = 0; it < 4; ++it) {
    double lg = std::log(R + xnorm) + 1.0;
    R = std::max(R, std::pow(C * lg / (d * budget), 1.0 / d));
  }
  return R;
}

struct Feature {
  double rc, sigma;
  int m;
  double weight;  // |combined weight * amplitude|
};

std::vector<Feature> features(const FieldDescriptor& f) {
  std::vector<Feature> out;
  std::vector<std::pair<const FieldDescriptor*, double>> stack{{&f, 1.0}};
  while (!stack.empty()) {
    const auto [g, w] = stack.back();
    stack.pop_back();
    if (g->kind() == FieldKind::linear_combination) {
      for (const auto& t : g->terms()) stack.push_back({t.field.get(), w * t.weight});
      continue;
    }
    const auto& p = g->params();
    out.push_back({std::hypot(p.center.x, p.center.y), p.sigma, p.m, std::abs(w * p.amplitude)});
  }
  return out;
}

// Integrates kernel(x, y) B(y) over the plane as near (polar about x, weight
// w) plus far (polar about the origin, weight 1 - w). The near kernel is
// given in polar form so that the log or 1/s singularity is absorbed.
// Angular integrals are periodic trapezoid sums sized to the local feature
// width; radial integrals are adaptive.
template <int Dim, class NearK, class FarK>
std::array<double, Dim> split_integral(const FieldDescriptor& f, Point x,
                                       NearK near_kernel, FarK far_kernel) {
  const double xr = std::hypot(x.x, x.y);
  const double ax = std::atan2(x.y, x.x);
  const double R = tail_radius(f, xr, 1e-12);
  const auto feats = features(f);
  // Absolute floor for the adaptive radial sums, relative to the flux scale
  // of |B|; components that vanish by symmetry would otherwise refine on
  // rounding noise.
  double scale = 0.0;
  for (const auto& ft : feats) scale += ft.weight * ft.sigma * ft.sigma;
  const double floor = 1e-13 * kTwoPi * scale;
  // The near disc may grow with the distance from x to the field cores.
  double clearance = INFINITY;
  for (const auto& ft : feats) clearance = std::min(clearance, std::abs(xr - ft.rc) - 2.0 * ft.sigma);
  const double rho = std::max(std::min(f.min_scale(), 1.0), 0.5 * clearance);
  std::array<double, Dim> out{};

  std::vector<double> interior;
  for (const auto& ft : feats)
    for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) interior.push_back(ft.rc + k * ft.sigma);
  for (double k : {-1.0, -0.75, -0.5, 0.0, 0.5, 0.75, 1.0}) interior.push_back(xr + k * rho);
  const auto breaks = detail::radial_breaks(0.0, R, 0.25 * f.min_scale(), interior);

  auto ring_points = [&](double t) {
    double width = 1.0;
    for (const auto& ft : feats) {
      width = std::min(width, std::max(ft.sigma, std::abs(t - ft.rc)) / std::max(t, 1e-300));
      if (ft.m > 0) width = std::min(width, 1.0 / ft.m);
    }
    double npts = std::ceil(2.0 * kPi / (width / 6.0));
    // the kernel singularity at y = x sits |t - |x|| / t away in complex angle
    npts = std::max(npts, std::ceil(60.0 * t / std::max(std::abs(t - xr), 0.5 * rho)));
    // resolve the cutoff transition where the ring crosses the near disc
    if (std::abs(t - xr) < rho) npts = std::max(npts, std::ceil(400.0 * kPi * t / rho));
    return static_cast<int>(std::clamp(npts, 32.0, 65536.0));
  };

  for (int c = 0; c < Dim; ++c) {
    constexpr int kTheta = 64;
    auto near_ring = [&](double s) {
      double acc = 0.0;
      for (int k = 0; k < kTheta; ++k) {
        double th = kTwoPi * k / kTheta;
        double ct = std::cos(th), st = std::sin(th);
        acc += f(x.x + s * ct, x.y + s * st) * near_kernel(s, ct, st, c);
      }
      return acc * kTwoPi / kTheta;
    };
    auto nr = detail::gk_panels(
        [&](double s) { return cutoff(s, rho) * near_ring(s); },
        {0.0, 0.25 * rho, 0.5 * rho, 0.75 * rho, rho}, 1e-10, 6, floor);

    auto far_ring = [&](double t) {
      const int np = ring_points(t);
      double acc = 0.0;
      for (int k = 0; k < np; ++k) {
        double a = ax + kTwoPi * k / np;
        double yx = t * std::cos(a), yy = t * std::sin(a);
        double dx = x.x - yx, dy = x.y - yy;
        double d = std::hypot(dx, dy);
        double w = 1.0 - cutoff(d, rho);
        if (w == 0.0) continue;
        acc += f(yx, yy) * w * far_kernel(dx, dy, d, c);
      }
      return acc * kTwoPi / np;
    };
    auto fr = detail::gk_panels([&](double t) { return t * far_ring(t); }, breaks, 1e-10, 10,
                                floor);
    out[c] = (nr.value + fr.value) / kTwoPi;
  }
  return out;
}

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

double potential_at(const FieldDescriptor& f, Point x) {
  auto near = [](double s, double, double, int) { return s * std::log(s); };
  auto far = [](double, double, double d, int) { return std::log(d); };
  return split_integral<1>(f, x, near, far)[0];
}

std::array<double, 2> potential_gradient_at(const FieldDescriptor& f, Point x) {
  // grad_x ln|x - y| = (x - y) / |x - y|^2; with y = x + s e we get -e / s,
  // and the polar measure s ds cancels the 1/s.
  auto near = [](double, double ct, double st, int c) { return c == 0 ? -ct : -st; };
  auto far = [](double dx, double dy, double d, int c) {
    return (c == 0 ? dx : dy) / (d * d);
  };
  return split_integral<2>(f, x, near, far);
}

std::array<double, 2> vector_potential_at(const FieldDescriptor& f, Point x) {
  auto g = potential_gradient_at(f, x);
  return {-g[1], g[0]};
}

ScalarGrid potential_grid(const FieldDescriptor& f, const GridSpec& grid) {
  grid.validate();
  const int n = grid.n, M = 2 * n, Mc = M / 2 + 1;
  const double h = grid.h();
  const std::size_t real_size = static_cast<std::size_t>(M) * M;
  const std::size_t cplx_size = static_cast<std::size_t>(M) * Mc;

  ScalarGrid b = sample_to_grid(f, grid);
  double* src = fftw_alloc_real(real_size);
  double* ker = fftw_alloc_real(real_size);
  fftw_complex* fs = fftw_alloc_complex(cplx_size);
  fftw_complex* fk = fftw_alloc_complex(cplx_size);
  std::fill(src, src + real_size, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) src[static_cast<std::size_t>(j) * M + i] = b(i, j);

  // Cell-integrated log kernel; the self cell is integrated exactly.
  const double a = 0.5 * h;
  const double self = 2.0 * a * a * (std::log(2.0 * a * a) - 3.0 + kPi / 2.0);
  for (int j = 0; j < M; ++j) {
    int dj = j < n ? j : j - M;
    for (int i = 0; i < M; ++i) {
      int di = i < n ? i : i - M;
      double v = (di == 0 && dj == 0) ? self
                                      : h * h * std::log(h * std::hypot(di, dj));
      ker[static_cast<std::size_t>(j) * M + i] = v / kTwoPi;
    }
  }

  fftw_plan p_src, p_ker, p_back;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    p_src = fftw_plan_dft_r2c_2d(M, M, src, fs, FFTW_ESTIMATE);
    p_ker = fftw_plan_dft_r2c_2d(M, M, ker, fk, FFTW_ESTIMATE);
    p_back = fftw_plan_dft_c2r_2d(M, M, fs, src, FFTW_ESTIMATE);
  }
  fftw_execute(p_src);
  fftw_execute(p_ker);
  for (std::size_t k = 0; k < cplx_size; ++k) {
    double re = fs[k][0] * fk[k][0] - fs[k][1] * fk[k][1];
    double im = fs[k][0] * fk[k][1] + fs[k][1] * fk[k][0];
    fs[k][0] = re;
    fs[k][1] = im;
  }
  fftw_execute(p_back);

  const double outside = total_flux(f) - flux_in_box(f, grid.L);
  ScalarGrid phi(grid);
  const double scale = 1.0 / static_cast<double>(real_size);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Point x = grid.node(i, j);
      phi(i, j) = src[static_cast<std::size_t>(j) * M + i] * scale +
                  outside * std::log(std::hypot(x.x, x.y));
    }

  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(p_src);
    fftw_destroy_plan(p_ker);
    fftw_destroy_plan(p_back);
  }
  fftw_free(src);
  fftw_free(ker);
  fftw_free(fs);
  fftw_free(fk);
  return phi;
}

namespace {

// Derivative along a line of n samples with spacing h.
double line_derivative(const double* v, std::ptrdiff_t stride, int i, int n, double h) {
  auto at = [&](int k) { return v[k * stride]; };
  if (n >= 5 && i >= 2 && i <= n - 3)
    return (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
  if (i >= 1 && i <= n - 2) return (at(i + 1) - at(i - 1)) / (2.0 * h);
  if (n < 3) return i == 0 ? (at(1) - at(0)) / h : (at(n - 1) - at(n - 2)) / h;
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
  return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
}

}  // namespace

VectorGrid vector_potential(const ScalarGrid& phi) {
  const auto& g = phi.spec;
  const int n = g.n;
  const double h = g.h();
  VectorGrid a(g);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      std::size_t k = g.index(i, j);
      double d1 = line_derivative(&phi.values[g.index(0, j)], 1, i, n, h);
      double d2 = line_derivative(&phi.values[g.index(i, 0)], n, j, n, h);
      a.x[k] = -d2;
      a.y[k] = d1;
    }
  return a;
}

ScalarGrid discrete_curl(const VectorGrid& a) {
  const auto& g = a.spec;
  const int n = g.n;
  const double h = g.h();
  ScalarGrid c(g);
  for (int j = 1; j + 1 < n; ++j)
    for (int i = 1; i + 1 < n; ++i) {
      double d1a2 = (a.y[g.index(i + 1, j)] - a.y[g.index(i - 1, j)]) / (2.0 * h);
      double d2a1 = (a.x[g.index(i, j + 1)] - a.x[g.index(i, j - 1)]) / (2.0 * h);
      c(i, j) = d1a2 - d2a1;
    }
  return c;
}

ComplexGrid ac_state(const ScalarGrid& phi, int j) {
  if (j < 0) throw ContractViolation("ac_state: j must be non-negative");
  const auto& g = phi.spec;
  ComplexGrid out(g);
  for (int b = 0; b < g.n; ++b)
    for (int a = 0; a < g.n; ++a) {
      Point x = g.node(a, b);
      cplx z(x.x, x.y), zj = 1.0;
      for (int k = 0; k < j; ++k) zj *= z;
      out(a, b) = std::exp(-phi(a, b)) * zj;
    }
  return out;
}

ComplexGrid ac_state(const FieldDescriptor& f, const GridSpec& grid, int j) {
  return ac_state(potential_grid(f, grid), j);
}

AsymptoticsReport asymptotics_probe(const FieldDescriptor& f,
                                    const std::vector<double>& radii, int angles) {
  if (radii.empty()) throw ConfigError("asymptotics: no radii given");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 1.0)) throw ConfigError("asymptotics: radii must exceed 1");
    if (k > 0 && !(radii[k] > radii[k - 1]))
      throw ConfigError("asymptotics: radii must be increasing");
  }
  if (angles < 1) throw ConfigError("asymptotics: need at least one angle");

  AsymptoticsReport rep;
  auto analytic = f.analytic_flux();
  rep.flux = analytic ? *analytic : quadrature_flux(f).value;
  rep.zero_flux = analytic && *analytic == 0.0;
  rep.radii = radii;
  std::vector<double> dev(radii.size()), grad(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    double r = radii[k], lr = std::log(r);
    std::vector<double> d(angles), gm(angles);
    parallel_for(static_cast<std::size_t>(angles), [&](std::size_t b, std::size_t e) {
      for (std::size_t q = b; q < e; ++q) {
        double th = kTwoPi * static_cast<double>(q) / angles;
        Point x{r * std::cos(th), r * std::sin(th)};
        d[q] = std::abs(potential_at(f, x) - rep.flux * lr) / lr;
        if (rep.zero_flux) {
          auto gr = potential_gradient_at(f, x);
          gm[q] = std::hypot(gr[0], gr[1]);
        }
      }
    });
    dev[k] = *std::max_element(d.begin(), d.end());
    grad[k] = *std::max_element(gm.begin(), gm.end());
  }
  rep.max_relative_deviation = dev;
  rep.deviation_decreasing = true;
  for (std::size_t k = 1; k < dev.size(); ++k)
    if (!(dev[k] < dev[k - 1])) rep.deviation_decreasing = false;
  if (rep.zero_flux) {
    rep.max_gradient = grad;
    if (radii.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0, m = static_cast<double>(radii.size());
      for (std::size_t k = 0; k < radii.size(); ++k) {
        double lx = std::log(radii[k]), ly = std::log(grad[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
      }
      rep.gradient_exponent_fit = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
  }
  return rep;
}

}  // namespace pauli2d
