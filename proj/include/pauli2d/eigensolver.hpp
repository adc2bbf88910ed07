#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pauli2d/fields.hpp"
#include "pauli2d/pauli_operator.hpp"

namespace pauli2d {

struct EigenOptions {
  int k = 6;                     // wanted eigenpairs, at most 64
  double tolerance = 1e-8;       // residual relative to the norm estimate
  double count_threshold = 1e-6; // eigenvalues below -threshold count as negative
  int max_iterations = 2000;     // filter passes
  int filter_degree = 50;
  int guard = 8;                 // extra block columns beyond k
  std::uint64_t seed = 20240611;

  void validate() const;
};

struct SpectrumReport {
  GridSpec grid;
  double g = 0.0;
  Spin spin = Spin::minus;
  double lambda = 1.0;
  double tolerance = 0.0;        // residual tolerance relative to norm_estimate
  double count_threshold = 0.0;
  std::optional<int> predicted_lower_bound;
  std::vector<double> eigenvalues;  // ascending, k of them
  std::vector<double> residuals;    // |H x - theta x| / |x|
  std::vector<ComplexGrid> eigenvectors;  // unit norm in the lumped product
  double norm_estimate = 0.0;
  int negative_count = 0;
  bool converged = false;
  // every computed eigenvalue was negative, so the count is only a lower bound
  bool count_saturated = false;
  int iterations = 0;
  long long matvecs = 0;

  bool usable_for_counting() const { return converged && !count_saturated; }
};

// Lowest k eigenpairs by Chebyshev-filtered subspace iteration with
// Rayleigh-Ritz and locking. `warm` vectors, if given, seed the block.
SpectrumReport lowest_eigenpairs(const PauliOperator& op, const EigenOptions& opt,
                                 const std::vector<ComplexGrid>* warm = nullptr);

// Zero-extends a grid function onto a larger nested grid.
ComplexGrid embed(const ComplexGrid& u, const GridSpec& outer);

struct StabilityReport {
  std::vector<SpectrumReport> rungs;
  std::vector<int> counts;
  bool stable = false;  // last two usable rungs agree
  std::optional<int> stabilized_count;
  std::optional<int> predicted_lower_bound;
};

// ceil(|lambda F|) when the spin/flux-sign combination is the one the
// existence result covers and g > 2; nothing otherwise.
std::optional<int> predicted_lower_bound(double flux, double g, Spin spin, double lambda);

StabilityReport count_stability_study(const FieldDescriptor& f, double g, Spin spin,
                                      double lambda, const std::vector<GridSpec>& ladder,
                                      const EigenOptions& opt);

}  // namespace pauli2d
