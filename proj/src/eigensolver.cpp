#include "pauli2d/eigensolver.hpp"

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include <cmath>
#include <random>

#include "pauli2d/error.hpp"

namespace pauli2d {

namespace {

// Row-major so that one stencil row serves every column of the block.
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Small = Eigen::MatrixXcd;

void apply_block(const PauliOperator& op, const Mat& X, Mat& Y, long long& matvecs) {
  Y.resize(X.rows(), X.cols());
  op.apply_hamiltonian_block(X.data(), Y.data(), static_cast<int>(X.cols()));
  matvecs += X.cols();
}

// Buffers reused across iterations; the blocks are large enough that fresh
// allocations would dominate the run time.
struct Workspace {
  Mat x, y, t, q;
  Eigen::HouseholderQR<Mat> qr;
};

void orthonormalize(Mat& X, Workspace& ws) {
  ws.qr.compute(X);
  ws.q.setIdentity(X.rows(), X.cols());
  ws.q.applyOnTheLeft(ws.qr.householderQ());
  X.swap(ws.q);
}

// Degree-m scaled Chebyshev filter on columns [first, end): damps [a, b],
// amplifies below a, normalised at a0.
void chebyshev_filter(const PauliOperator& op, Mat& X, Eigen::Index first, int m,
                      double a, double b, double a0, Workspace& ws, long long& matvecs) {
  const Eigen::Index nc = X.cols() - first;
  if (nc <= 0) return;
  const double e = 0.5 * (b - a), c = 0.5 * (b + a);
  double sigma = e / (a0 - c);
  const double tau = 2.0 / sigma;
  ws.x = X.rightCols(nc);
  ws.y.resize(X.rows(), nc);
  ws.t.resize(X.rows(), nc);
  const int cols = static_cast<int>(nc);
  op.apply_shifted_block(ws.x.data(), ws.y.data(), cols, c, sigma / e, 0.0, nullptr);
  matvecs += nc;
  for (int i = 2; i <= m; ++i) {
    double sigma_new = 1.0 / (tau - sigma);
    op.apply_shifted_block(ws.y.data(), ws.t.data(), cols, c, 2.0 * sigma_new / e,
                           -sigma * sigma_new, ws.x.data());
    matvecs += nc;
    ws.x.swap(ws.y);
    ws.y.swap(ws.t);
    sigma = sigma_new;
  }
  X.rightCols(nc) = ws.y;
}

}  // namespace

void EigenOptions::validate() const {
  if (k < 1 || k > 64) throw ConfigError("eigen.k must be in [1, 64]");
  if (!(tolerance > 0.0)) throw ConfigError("eigen.tolerance must be positive");
  if (!(count_threshold >= 0.0)) throw ConfigError("eigen.count_threshold must be >= 0");
  if (max_iterations < 1) throw ConfigError("eigen.max_iterations must be >= 1");
  if (filter_degree < 2) throw ConfigError("eigen.filter_degree must be >= 2");
  if (guard < 1) throw ConfigError("eigen.guard must be >= 1");
}

ComplexGrid embed(const ComplexGrid& u, const GridSpec& outer) {
  if (!nested_in(u.spec, outer)) throw ContractViolation("embed: grids are not nested");
  const int off = (outer.n - u.spec.n) / 2;
  ComplexGrid out(outer);
  for (int j = 0; j < u.spec.n; ++j)
    for (int i = 0; i < u.spec.n; ++i) out(i + off, j + off) = u(i, j);
  return out;
}

SpectrumReport lowest_eigenpairs(const PauliOperator& op, const EigenOptions& opt,
                                 const std::vector<ComplexGrid>* warm) {
  opt.validate();
  const GridSpec& grid = op.grid();
  const Eigen::Index N = static_cast<Eigen::Index>(op.dimension());
  const int k = static_cast<int>(std::min<Eigen::Index>(opt.k, N));
  const Eigen::Index bs = std::min<Eigen::Index>(k + opt.guard, N);
  const double ub = op.upper_bound();

  SpectrumReport rep;
  rep.grid = grid;
  rep.g = op.g();
  rep.spin = op.spin();
  rep.lambda = op.lambda();
  rep.tolerance = opt.tolerance;
  rep.count_threshold = opt.count_threshold;
  rep.norm_estimate = ub;

  Mat X(N, bs);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index c = 0; c < bs; ++c)
    for (Eigen::Index r = 0; r < N; ++r) X(r, c) = cplx(normal(rng), normal(rng));
  if (warm) {
    Eigen::Index c = 0;
    for (const auto& w : *warm) {
      if (c >= bs) break;
      if (!(w.spec == grid)) throw ContractViolation("warm start: grid mismatch");
      // small random admixture keeps the block full rank
      for (Eigen::Index r = 0; r < N; ++r) X(r, c) = w.values[r] + 1e-3 * X(r, c) / std::sqrt(double(N));
      ++c;
    }
  }
  Workspace ws;
  orthonormalize(X, ws);

  Mat HX, XV;
  Eigen::VectorXd theta;
  int locked = 0;
  auto rayleigh_ritz = [&]() {
    apply_block(op, X, HX, rep.matvecs);
    Small T = X.adjoint() * HX;
    T = 0.5 * (T + T.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Small> es(T);
    theta = es.eigenvalues();
    XV.resize(N, bs);
    XV.noalias() = X * es.eigenvectors();
    X.swap(XV);
    XV.noalias() = HX * es.eigenvectors();
    HX.swap(XV);
  };
  auto residuals = [&]() {
    std::vector<double> res(k);
    for (int j = 0; j < k; ++j) res[j] = (HX.col(j) - theta(j) * X.col(j)).norm();
    return res;
  };

  rayleigh_ritz();
  std::vector<double> res = residuals();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    locked = 0;
    while (locked < k && res[locked] <= opt.tolerance * ub) ++locked;
    rep.iterations = it - 1;
    if (locked >= k) {
      rep.converged = true;
      break;
    }
    double a = theta(bs - 1), a0 = theta(0);
    if (!(a < ub)) a = 0.5 * (a0 + ub);
    chebyshev_filter(op, X, locked, opt.filter_degree, a, ub, a0, ws, rep.matvecs);
    orthonormalize(X, ws);
    rayleigh_ritz();
    res = residuals();
    if (it % 50 == 0)
      spdlog::debug("chefsi n={} it={} locked={} theta0={:.10g} res={:.3g}", grid.n, it,
                    locked, theta(0), res[locked]);
  }
  if (!rep.converged) {
    locked = 0;
    while (locked < k && res[locked] <= opt.tolerance * ub) ++locked;
    rep.converged = locked >= k;
    rep.iterations = opt.max_iterations;
  }

  const double scale = 1.0 / grid.h();  // unit norm in h^2 sum |x|^2
  for (int j = 0; j < k; ++j) {
    rep.eigenvalues.push_back(theta(j));
    rep.residuals.push_back(res[j]);
    ComplexGrid v(grid);
    for (Eigen::Index r = 0; r < N; ++r) v.values[r] = X(r, j) * scale;
    rep.eigenvectors.push_back(std::move(v));
    if (theta(j) < -opt.count_threshold) ++rep.negative_count;
  }
  rep.count_saturated = rep.negative_count == k && k < N;
  spdlog::debug("chefsi n={} done: converged={} iterations={} matvecs={}", grid.n,
                rep.converged, rep.iterations, rep.matvecs);
  return rep;
}

std::optional<int> predicted_lower_bound(double flux, double g, Spin spin, double lambda) {
  double F = lambda * flux;
  if (!(g > 2.0) || F == 0.0) return std::nullopt;
  if ((F > 0.0 && spin == Spin::minus) || (F < 0.0 && spin == Spin::plus))
    return static_cast<int>(std::ceil(std::abs(F)));
  return std::nullopt;
}

StabilityReport count_stability_study(const FieldDescriptor& f, double g, Spin spin,
                                      double lambda, const std::vector<GridSpec>& ladder,
                                      const EigenOptions& opt) {
  if (ladder.empty()) throw ConfigError("ladder must not be empty");
  StabilityReport rep;
  rep.predicted_lower_bound = predicted_lower_bound(total_flux(f), g, spin, lambda);
  std::vector<ComplexGrid> warm;
  for (const auto& grid : ladder) {
    grid.validate();
    PauliOperator op(f, grid, g, spin, lambda);
    std::vector<ComplexGrid> seed;
    for (const auto& w : warm)
      if (nested_in(w.spec, grid)) seed.push_back(embed(w, grid));
    SpectrumReport s = lowest_eigenpairs(op, opt, seed.empty() ? nullptr : &seed);
    s.predicted_lower_bound = rep.predicted_lower_bound;
    spdlog::info("ladder L={} n={}: negative_count={} converged={}", grid.L, grid.n,
                 s.negative_count, s.converged);
    warm = s.eigenvectors;
    rep.counts.push_back(s.negative_count);
    rep.rungs.push_back(std::move(s));
  }
  const std::size_t m = rep.rungs.size();
  if (m >= 2 && rep.rungs[m - 1].usable_for_counting() &&
      rep.rungs[m - 2].usable_for_counting() && rep.counts[m - 1] == rep.counts[m - 2]) {
    rep.stable = true;
    rep.stabilized_count = rep.counts[m - 1];
  }
  return rep;
}

}  // namespace pauli2d
