#pragma once

#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wilsonline/lie_rep.hpp"
#include "wilsonline/types.hpp"

namespace wilsonline {

// Two-loop SU(2) fundamental Wilson line in powers of 1/k.
//
// Two ledgers describe the same series:
//  * grouped: term n ~ k^{-n}, t_n = i^n (3(-1)^n + 3^n) L^n / ((4k)^n n!);
//  * stochastic order m = 2n with k^{-m/2} J^m = t_{m/2} and J^m = 0 for
//    odd m.
// Self-linking contributions are taken to vanish for non-self-intersecting
// links (Hahn) and are not part of any value below.
struct ExpansionReport {
  double k = 0.0;
  double linking = 0.0;
  int order = 0;                     // N, number of grouped terms
  std::vector<Complex> coefficients;  // t_0 .. t_{N-1}
  std::vector<Complex> partial_sums;  // sum_{n <= i} t_n
  Complex closed_form;
  Complex remainder;  // closed_form - partial_sums.back()
};

// 3 exp(-iL/4k) + exp(3iL/4k).
Complex closed_form_su2(double linking, double k);

// t_n as above.
Complex grouped_term_su2(double linking, double k, int n);

ExpansionReport series_su2(double linking, double k, int order);

struct Coefficient {
  Complex value;
  bool odd = false;  // odd stochastic order, value is exactly 0
};

// Two-loop coefficient of stochastic order m for covariance c:
// Tr(sum E_a (x) E_a)^{m/2} c^{m/2} / (m/2)!, zero for odd m. c is the
// cross covariance E[(R_k x_1)(1) (R_k x_2)(1)], e.g. -(1/2ik) L.
// Throws std::invalid_argument for loops != 2.
Coefficient coefficient_jm(Complex covariance, const RepBasis& basis, int m,
                           int loops = 2);

// k^{N/2} |closed_form - sum_{m < N} k^{-m/2} J^m| for each k, with the
// stochastic-order ledger (grouped terms n with 2n < N).
std::vector<double> decay_check(double linking, std::span<const double> ks,
                                int order);

nlohmann::json to_json(const ExpansionReport& report);

}  // namespace wilsonline
