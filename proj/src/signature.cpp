#include "wilsonline/signature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace wilsonline {

namespace {

Matrix identity(int n) { return Matrix::Identity(n, n); }

// Coefficient array in the formal variable, truncated at degree R.
using Series = std::vector<Matrix>;

Series series_product(const Series& a, const Series& b) {
  const std::size_t len = a.size();
  const auto n = a[0].rows();
  Series out(len, Matrix::Zero(n, n));
  for (std::size_t i = 0; i < len; ++i)
    for (std::size_t j = 0; i + j < len; ++j) out[i + j].noalias() += a[i] * b[j];
  return out;
}

double series_norm(const Series& s) {
  double acc = 0.0;
  for (const Matrix& m : s) acc += inf_norm(m);
  return acc;
}

// exp(D + e S) truncated at degree R in e.
Series series_exp(const Matrix& d, const Matrix& s, int order) {
  const auto n = d.rows();
  const auto len = static_cast<std::size_t>(order) + 1;
  const bool d_zero = d.isZero(0.0);
  const bool s_zero = s.isZero(0.0);

  Series out(len, Matrix::Zero(n, n));
  if (s_zero) {
    out[0] = expm(d);
    return out;
  }
  if (d_zero) {
    out[0] = identity(static_cast<int>(n));
    for (std::size_t i = 1; i < len; ++i)
      out[i].noalias() = out[i - 1] * s / static_cast<double>(i);
    return out;
  }

  const double norm = inf_norm(d) + inf_norm(s);
  int squarings = 0;
  if (norm > 0.5)
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const double scale = std::ldexp(1.0, -squarings);
  const Matrix ds = d * scale, ss = s * scale;

  // Taylor kernel: term_k = term_{k-1} (D + e S) / k.
  Series term(len, Matrix::Zero(n, n));
  term[0] = identity(static_cast<int>(n));
  out[0] = term[0];
  for (int k = 1; k <= 40; ++k) {
    Series next(len, Matrix::Zero(n, n));
    for (std::size_t i = 0; i < len; ++i) {
      next[i].noalias() += term[i] * ds;
      if (i > 0) next[i].noalias() += term[i - 1] * ss;
    }
    for (Matrix& m : next) m /= static_cast<double>(k);
    term = std::move(next);
    for (std::size_t i = 0; i < len; ++i) out[i] += term[i];
    if (series_norm(term) < 1e-18) break;
  }
  for (int r = 0; r < squarings; ++r) out = series_product(out, out);
  return out;
}

}  // namespace

int DrivingPath::dim() const {
  if (!deterministic.empty()) return static_cast<int>(deterministic[0].rows());
  return 0;
}

void DrivingPath::validate() const {
  if (times.size() < 2) throw ValidationError("path grid needs two points");
  if (times.front() != 0.0 || times.back() != 1.0)
    throw ValidationError("path grid must run from 0 to 1");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("path grid must be strictly increasing");
  const std::size_t m = times.size() - 1;
  if (deterministic.size() != m || stochastic.size() != m)
    throw ValidationError("increment streams must have one entry per interval");
  const auto n = deterministic[0].rows();
  for (std::size_t i = 0; i < m; ++i) {
    const Matrix& a = deterministic[i];
    const Matrix& b = stochastic[i];
    if (a.rows() != n || a.cols() != n || b.rows() != n || b.cols() != n)
      throw ValidationError("increments must share one square shape");
  }
}

double DrivingPath::deterministic_variation() const {
  double v = 0.0;
  for (const Matrix& m : deterministic) v += inf_norm(m);
  return v;
}

double DrivingPath::stochastic_variation() const {
  double v = 0.0;
  for (const Matrix& m : stochastic) v += inf_norm(m);
  return v;
}

DrivingPath DrivingPath::zero(std::vector<double> times, int n) {
  DrivingPath p;
  const std::size_t m = times.size() - 1;
  p.times = std::move(times);
  p.deterministic.assign(m, Matrix::Zero(n, n));
  p.stochastic.assign(m, Matrix::Zero(n, n));
  return p;
}

std::vector<double> DrivingPath::uniform_grid(int intervals) {
  if (intervals < 1) throw std::invalid_argument("need at least one interval");
  std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i)
    t[i] = static_cast<double>(i) / intervals;
  t.back() = 1.0;
  return t;
}

Matrix GradedHolonomy::total() const {
  Matrix acc = Matrix::Zero(slices[0].rows(), slices[0].cols());
  for (const Matrix& z : slices) acc += z;
  return acc;
}

double inf_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

Matrix expm(const Matrix& a) {
  const auto n = a.rows();
  const double norm = inf_norm(a);
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix x = a * std::ldexp(1.0, -squarings);
  Matrix out = Matrix::Identity(n, n);
  Matrix term = out;
  // ||x|| <= 1/2 so degree 13 leaves < 1e-18 relative; continue only if a
  // term is still above roundoff.
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    out += term;
    if (k >= 13 && inf_norm(term) < 1e-18) break;
  }
  for (int r = 0; r < squarings; ++r) out = out * out;
  return out;
}

Matrix holonomy_full(const DrivingPath& path) {
  path.validate();
  Matrix w = identity(path.dim());
  for (std::size_t i = 0; i < path.intervals(); ++i)
    w = expm(path.deterministic[i] + path.stochastic[i]) * w;
  return w;
}

GradedHolonomy holonomy_graded(const DrivingPath& path, int max_order) {
  if (max_order < 0) throw std::invalid_argument("order must be nonnegative");
  path.validate();
  const int n = path.dim();
  const auto len = static_cast<std::size_t>(max_order) + 1;
  Series w(len, Matrix::Zero(n, n));
  w[0] = identity(n);
  for (std::size_t i = 0; i < path.intervals(); ++i)
    w = series_product(
        series_exp(path.deterministic[i], path.stochastic[i], max_order), w);
  GradedHolonomy g;
  g.max_order = max_order;
  g.slices = std::move(w);
  g.truncation_tail_bound = tail_bound(path, max_order);
  return g;
}

Complex wilson_slices(std::span<const GradedHolonomy> loops, int m) {
  if (m < 0) throw std::invalid_argument("order must be nonnegative");
  if (loops.empty()) return 1.0;
  const auto n = loops[0].slices[0].rows();
  for (const auto& g : loops) {
    if (g.slices[0].rows() != n)
      throw std::invalid_argument("loops use different representations");
    if (m > g.max_order)
      throw std::invalid_argument("requested order exceeds a loop's slices");
  }
  std::vector<std::vector<Complex>> tr(loops.size());
  for (std::size_t j = 0; j < loops.size(); ++j)
    for (const Matrix& z : loops[j].slices) tr[j].push_back(z.trace());

  // Sum over compositions, loop by loop.
  std::function<Complex(std::size_t, int)> rec = [&](std::size_t j,
                                                     int left) -> Complex {
    if (j + 1 == loops.size()) return tr[j][left];
    Complex acc = 0.0;
    for (int i = 0; i <= left; ++i) acc += tr[j][i] * rec(j + 1, left - i);
    return acc;
  };
  return rec(0, m);
}

double tail_bound(const DrivingPath& path, int max_order) {
  if (max_order < 0) throw std::invalid_argument("order must be nonnegative");
  const double v = path.deterministic_variation() + path.stochastic_variation();
  if (v == 0.0) return 0.0;
  double sum = 0.0;
  const double logv = std::log(v);
  for (int r = max_order + 1;; ++r) {
    const double term = std::exp(r * logv - std::lgamma(r + 1.0));
    sum += term;
    if (r > v && term <= 1e-17 * sum) break;
    if (r > max_order + 100000) break;
  }
  return sum;
}

bool minkowski_check(const Eigen::MatrixXd& x, int q) {
  if (q < 1) throw std::invalid_argument("q must be a positive integer");
  const double p = 2.0 * q;
  double lhs = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    lhs += std::pow(std::abs(x.row(i).sum()), p);
  double inner = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double col = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      col += std::pow(std::abs(x(i, j)), p);
    inner += std::pow(col, 1.0 / p);
  }
  const double rhs = std::pow(inner, p);
  return lhs <= rhs * (1.0 + 1e-12) + 1e-300;
}

DrivingPath connection_path(const LoopCurve& loop,
                            std::span<const SmoothOneForm> components,
                            const RepBasis& basis, int intervals,
                            const Mollifier* mollifier, int sub_grid) {
  if (components.size() != basis.generators.size())
    throw ValidationError("need one 1-form component per basis element");
  DrivingPath p = DrivingPath::zero(DrivingPath::uniform_grid(intervals),
                                    basis.dim_rep);
  for (int i = 0; i < intervals; ++i) {
    const double a = p.times[i], b = p.times[i + 1];
    Matrix inc = Matrix::Zero(basis.dim_rep, basis.dim_rep);
    for (std::size_t alpha = 0; alpha < components.size(); ++alpha) {
      const double c =
          mollifier ? mollified_line_integral(loop, components[alpha],
                                              *mollifier, a, b, sub_grid)
                    : line_integral(loop, components[alpha], a, b, sub_grid);
      inc += c * basis.generators[alpha];
    }
    p.deterministic[i] = inc;
  }
  return p;
}

}  // namespace wilsonline
