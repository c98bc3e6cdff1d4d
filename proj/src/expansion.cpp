#include "wilsonline/expansion.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace wilsonline {

namespace {

void require_level(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("level k must be positive");
}

}  // namespace

Complex closed_form_su2(double linking, double k) {
  require_level(k);
  const Complex i{0.0, 1.0};
  const double x = linking / (4.0 * k);
  return 3.0 * std::exp(-i * x) + std::exp(3.0 * i * x);
}

Complex grouped_term_su2(double linking, double k, int n) {
  require_level(k);
  if (n < 0) throw std::invalid_argument("term index must be nonnegative");
  if (n == 0) return 4.0;
  const Complex i{0.0, 1.0};
  const double x = linking / (4.0 * k);
  // (3(-1)^n + 3^n) x^n / n!, built up factor by factor.
  double minus = 1.0, three = 1.0;
  for (int j = 1; j <= n; ++j) {
    minus *= -x / j;
    three *= 3.0 * x / j;
  }
  return std::pow(i, n) * (3.0 * minus + three);
}

ExpansionReport series_su2(double linking, double k, int order) {
  require_level(k);
  if (order < 1) throw std::invalid_argument("need at least one term");
  ExpansionReport r;
  r.k = k;
  r.linking = linking;
  r.order = order;
  Complex acc = 0.0;
  for (int n = 0; n < order; ++n) {
    const Complex t = grouped_term_su2(linking, k, n);
    acc += t;
    r.coefficients.push_back(t);
    r.partial_sums.push_back(acc);
  }
  r.closed_form = closed_form_su2(linking, k);
  r.remainder = r.closed_form - r.partial_sums.back();
  return r;
}

Coefficient coefficient_jm(Complex covariance, const RepBasis& basis, int m,
                           int loops) {
  if (loops != 2)
    throw std::invalid_argument("closed-form coefficients exist for two loops only");
  if (m < 0) throw std::invalid_argument("order must be nonnegative");
  if (m % 2) return {0.0, true};
  const int half = m / 2;
  Complex v = tensor_trace_power(basis, half);
  for (int j = 1; j <= half; ++j) v *= covariance / static_cast<double>(j);
  return {v, false};
}

std::vector<double> decay_check(double linking, std::span<const double> ks,
                                int order) {
  if (order < 1) throw std::invalid_argument("order must be positive");
  std::vector<double> out;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (i > 0 && !(ks[i] > ks[i - 1]))
      throw std::invalid_argument("k list must be increasing");
    const double k = ks[i];
    Complex partial = 0.0;
    for (int n = 0; 2 * n < order; ++n) partial += grouped_term_su2(linking, k, n);
    const Complex rem = closed_form_su2(linking, k) - partial;
    out.push_back(std::pow(k, 0.5 * order) * std::abs(rem));
  }
  return out;
}

nlohmann::json to_json(const ExpansionReport& r) {
  auto cplx = [](Complex z) { return nlohmann::json{z.real(), z.imag()}; };
  nlohmann::json grouped = nlohmann::json::array();
  nlohmann::json stochastic = nlohmann::json::array();
  nlohmann::json coefficients = nlohmann::json::array();
  nlohmann::json partial_sums = nlohmann::json::array();
  for (int n = 0; n < r.order; ++n) {
    coefficients.push_back(cplx(r.coefficients[n]));
    partial_sums.push_back(cplx(r.partial_sums[n]));
    grouped.push_back({{"n", n},
                       {"k_power", -n},
                       {"term", cplx(r.coefficients[n])},
                       {"partial_sum", cplx(r.partial_sums[n])}});
  }
  for (int m = 0; m < 2 * r.order - 1; ++m) {
    const Complex term = m % 2 ? Complex(0.0) : r.coefficients[m / 2];
    stochastic.push_back({{"m", m},
                          {"k_power", -0.5 * m},
                          {"grouped_n", m % 2 ? nlohmann::json() : nlohmann::json(m / 2)},
                          {"term", cplx(term)},
                          {"J", cplx(term * std::pow(r.k, 0.5 * m))}});
  }
  return {{"k", r.k},
          {"L", r.linking},
          {"N", r.order},
          {"coefficients", coefficients},
          {"partial_sums", partial_sums},
          {"grouped_ledger", grouped},
          {"stochastic_order_ledger", stochastic},
          {"closed_form", cplx(r.closed_form)},
          {"remainder", cplx(r.remainder)},
          {"self_linking",
           "T_self = 0 for non-self-intersecting links (Hahn); excluded"}};
}

}  // namespace wilsonline
