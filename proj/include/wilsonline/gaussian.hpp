#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wilsonline/lie_rep.hpp"
#include "wilsonline/signature.hpp"
#include "wilsonline/spectral.hpp"
#include "wilsonline/types.hpp"

namespace wilsonline {

// Mean-zero Gaussian vector described by its covariance E[X_i X_j].
struct GaussianSystem {
  Eigen::MatrixXd covariance;

  std::size_t size() const { return static_cast<std::size_t>(covariance.rows()); }
  // Symmetric to 1e-12, eigenvalues >= -1e-10.
  void validate() const;
  // B with B B^T = covariance (symmetric square root).
  Eigen::MatrixXd factor() const;
};

// E[X_{i_1} ... X_{i_2l}] as the sum over perfect matchings of products of
// covariance entries. Odd-length lists give exactly 0.
double wick_moment(const GaussianSystem& system, std::span<const int> indices);

// count x dim iid standard normals, draw (s, c) = standard_normal(seed, s, c).
struct SampleBatch {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> draws;

  double operator()(std::size_t s, std::size_t c) const {
    return draws[s * dim + c];
  }
  std::span<const double> row(std::size_t s) const {
    return {draws.data() + s * dim, dim};
  }
};

SampleBatch sample(std::size_t dim, std::size_t count, std::uint64_t seed);

// Coordinates for a spectral model with `lie_dim` independent Lie
// components: coordinate alpha * J + j is <x, h_j (x) E_alpha>.
SampleBatch sample(const SpectralModel& model, std::size_t count,
                   std::uint64_t seed, int lie_dim = 1);

// Mean and batch-means standard errors (real and imaginary parts apart).
struct Estimate {
  Complex mean;
  double se_real = 0.0;
  double se_imag = 0.0;
  std::size_t count = 0;
  int batches = 0;
};

Estimate batch_means(std::span<const Complex> values, int batches = 32);

// Realized Gaussian process t -> <x, R u~(t)> for every sample in a batch.
struct ProcessRealization {
  std::size_t count = 0;
  std::vector<double> times;
  std::vector<Complex> values;  // count x times.size()

  Complex value(std::size_t s, std::size_t i) const {
    return values[s * times.size() + i];
  }
  // Increment over interval i, [t_i, t_{i+1}].
  Complex increment(std::size_t s, std::size_t i) const {
    return value(s, i + 1) - value(s, i);
  }
};

// Per-mode weights w_j(t) = (1 + lambda_j^2)^{p/2} (r_j if rk) u~_j(t); the
// path is lifted first if it is not already.
std::vector<std::vector<Complex>> process_weights(const CurrentPath& path,
                                                  const SpectralModel& model,
                                                  bool rk);

ProcessRealization realize_process(const SampleBatch& batch,
                                   const CurrentPath& path,
                                   const SpectralModel& model, bool rk);

// One loop's data for the Wilson-line estimator: Lie components of its
// current (any subset of lie indices, shared grid) and an optional
// background connection given as deterministic increments on that grid.
struct LoopCurrents {
  std::vector<CurrentPath> components;
  std::vector<Matrix> background;
};

struct WilsonEstimate {
  Estimate estimate;
  int order = 0;
  double tail_bound_mean = 0.0;
  double tail_bound_max = 0.0;
};

// Monte Carlo estimate of E[ sum_{m <= order} F^m(R x) ] where F^m is the
// order-m slice of prod_j Tr W_{gamma_j}. Samples run in parallel, each
// writing its own slot; the reduction order is fixed.
WilsonEstimate mc_wilson(const SampleBatch& batch,
                         std::span<const LoopCurrents> loops,
                         const SpectralModel& model, const RepBasis& basis,
                         int order, bool rk = true);

}  // namespace wilsonline
