#pragma once

#include <span>
#include <vector>

#include "wilsonline/geometry.hpp"
#include "wilsonline/lie_rep.hpp"
#include "wilsonline/types.hpp"

namespace wilsonline {

// Matrix-valued driving path given by Stieltjes increments on a shared
// grid 0 = t_0 < ... < t_T = 1. The deterministic stream carries the
// background connection, the stochastic stream the Gaussian part.
struct DrivingPath {
  std::vector<double> times;
  std::vector<Matrix> deterministic;
  std::vector<Matrix> stochastic;

  std::size_t intervals() const { return deterministic.size(); }
  int dim() const;

  // Throws ValidationError on a malformed grid or mismatched streams.
  void validate() const;

  double deterministic_variation() const;
  double stochastic_variation() const;

  // All-zero path of representation dimension n on `times`.
  static DrivingPath zero(std::vector<double> times, int n);
  static std::vector<double> uniform_grid(int intervals);
};

// Truncated expansion of the holonomy in a formal variable marking the
// stochastic stream: slices[i] = Z(i), the part of total stochastic order i.
struct GradedHolonomy {
  int max_order = 0;
  std::vector<Matrix> slices;
  double truncation_tail_bound = 0.0;

  Matrix total() const;
};

// Induced infinity norm (max absolute row sum).
double inf_norm(const Matrix& a);

// Matrix exponential by scaling and squaring around a Taylor kernel.
Matrix expm(const Matrix& a);

// Ordered product of exp(D_i + S_i). Later intervals multiply on the left:
// W <- exp(D_i + S_i) W. The opposite convention traverses the loop
// backwards; traces of products of traces agree under both.
Matrix holonomy_full(const DrivingPath& path);

// Z(0..max_order) by carrying an array of max_order + 1 matrix
// coefficients through each interval factor exp(D_i + e S_i).
GradedHolonomy holonomy_graded(const DrivingPath& path, int max_order);

// sum over compositions i_1 + ... + i_s = m of prod_j Tr Z_j(i_j).
// Throws std::invalid_argument when m exceeds some loop's max order or the
// representation dimensions differ.
Complex wilson_slices(std::span<const GradedHolonomy> loops, int m);

// sum_{r > max_order} V^r / r! with V the combined total variation of both
// streams (induced infinity norm). Majorizes || sum_{i > R} Z(i) ||.
double tail_bound(const DrivingPath& path, int max_order);

// Checks sum_i |sum_j X_ij|^{2q} <= (sum_j (sum_i |X_ij|^{2q})^{1/2q})^{2q}
// up to a relative 1e-12 slack. Test helper.
bool minkowski_check(const Eigen::MatrixXd& x, int q);

// Deterministic driving path of a Lie-algebra valued 1-form
// A = sum_a A^a E_a along a loop: increment i is
// sum_a (int_{t_i}^{t_{i+1}} A^a) E_a, optionally against the mollified
// form. `components` has one scalar 1-form per basis element.
DrivingPath connection_path(const LoopCurve& loop,
                            std::span<const SmoothOneForm> components,
                            const RepBasis& basis, int intervals,
                            const Mollifier* mollifier = nullptr,
                            int sub_grid = 8);

}  // namespace wilsonline
