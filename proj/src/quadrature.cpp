#include "wilsonline/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>

namespace wilsonline {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  // legendre_p_zeros returns the nonnegative zeros in ascending order.
  const std::vector<double> pos = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it)
    if (*it != 0.0) x.push_back(-*it);
  for (double z : pos) x.push_back(z);

  QuadratureRule rule;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (double xi : x) {
    const double dp = boost::math::legendre_p_prime<double>(n, xi);
    const double w = 2.0 / ((1.0 - xi * xi) * dp * dp);
    rule.nodes.push_back(mid + half * xi);
    rule.weights.push_back(half * w);
  }
  return rule;
}

}  // namespace wilsonline
