#pragma once

#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wilsonline/types.hpp"

namespace wilsonline {

// Coefficient conventions, used by every function below:
//
//  * e_j is the L^2-orthonormal eigenbasis, Q e_j = lambda_j e_j.
//  * A current u is stored by its L^2 coefficients u_j = (u, e_j).
//  * Its dual lift is u~ = (I + Q^2)^{-p} u, coefficients
//    (1 + lambda_j^2)^{-p} u_j.
//  * h_j = (1 + lambda_j^2)^{-p/2} e_j is orthonormal for
//    (u, v)_p = sum_j (1 + lambda_j^2)^p u_j v_j.
//  * A sample x has coordinates g_j = <x, h_j>, iid standard normal, and
//    <x, a> = sum_j g_j (1 + lambda_j^2)^{p/2} a_j.
//  * R_k multiplies the h_j-coordinate j by r_j (rk_coefficients).
struct SpectralModel {
  std::vector<double> eigenvalues;
  int p = 1;
  double k = 1.0;
  std::optional<double> n;  // regulator; empty means n = infinity

  std::size_t size() const { return eigenvalues.size(); }

  // (1 + lambda_j^2)^{-p}
  double weight(std::size_t j) const;

  // min_j |lambda_j|
  double rho() const;

  // sum_j (1 + lambda_j^2)^{-p} |lambda_j|
  double summability_proxy() const;

  // Throws ValidationError for an empty spectrum, a zero eigenvalue,
  // p < 0, k <= 0 or n <= 0.
  void validate() const;

  // lambda = +-1, +-2, ..., +-J/2 (J even).
  static SpectralModel symmetric_preset(int modes, int p, double k,
                                        std::optional<double> n = {});
  // lambda = 1, 2, ..., J.
  static SpectralModel single_sign_preset(int modes, int p, double k,
                                          std::optional<double> n = {});
};

struct CurrentVector {
  std::vector<double> coeffs;
  bool lifted = false;
};

// Time-indexed coefficients of one Lie component of a loop current.
struct CurrentPath {
  std::vector<double> times;
  std::vector<CurrentVector> values;
  int lie_index = 0;

  // max over grid intervals and modes of |u_j(t_{i+1}) - u_j(t_i)| / dt.
  double lipschitz_bound() const;
  void validate(std::size_t modes) const;
};

// sum_j (1 + lambda_j^2)^p u_j v_j
double inner_p(const CurrentVector& u, const CurrentVector& v,
               const SpectralModel& model);

CurrentVector dual_lift(const CurrentVector& u, const SpectralModel& model);

// r_j = sqrt(n) / sqrt(1 - 2 i n k a_j) for finite n and
// r_j = (-2 i k a_j)^{-1/2} at n = infinity, a_j = (1 + lambda_j^2)^{-p}
// lambda_j, principal branch (-pi/2 < arg sqrt < pi/2).
std::vector<Complex> rk_coefficients(const SpectralModel& model);

// prod_j (1 - 2 i n k a_j)^{-1/2}; finite n only.
Complex z_normalizer(const SpectralModel& model);

// sum_j (1 + lambda_j^2)^{-p} lambda_j x_j^2, x_j = <x, h_j>.
double cs_form(std::span<const double> coords, const SpectralModel& model);

// E[<x, R_k u~> <x, R_k v~>] for unlifted u, v at n = infinity. Evaluated
// through the r_j and through -(1/2ik) sum_j u_j v_j / lambda_j; throws
// InvariantViolation if the two disagree beyond 1e-10.
Complex covariance_rk(const CurrentVector& u, const CurrentVector& v,
                      const SpectralModel& model);

// int exp(i a y^2) exp(-y^2/2) dy / sqrt(2 pi) by Gauss-Kronrod panels
// between the zeros of the phase. Equals (1 - 2ia)^{-1/2} for the single
// mode with a = n k (1 + lambda^2)^{-p} lambda.
Complex fresnel_quadrature(double a);

SpectralModel spectrum_from_json(const nlohmann::json& doc);
nlohmann::json spectrum_to_json(const SpectralModel& model);

}  // namespace wilsonline
