#include "wilsonline/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include "wilsonline/parallel.hpp"
#include "wilsonline/rng.hpp"

namespace wilsonline {

void GaussianSystem::validate() const {
  const Eigen::MatrixXd& c = covariance;
  if (c.rows() == 0 || c.rows() != c.cols())
    throw ValidationError("covariance must be a nonempty square matrix");
  if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("covariance must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw ValidationError("covariance must be positive semidefinite");
}

Eigen::MatrixXd GaussianSystem::factor() const {
  validate();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

double matchings(const Eigen::MatrixXd& c, std::vector<int>& rest) {
  if (rest.empty()) return 1.0;
  const int first = rest.front();
  double acc = 0.0;
  for (std::size_t i = 1; i < rest.size(); ++i) {
    const int partner = rest[i];
    std::vector<int> sub;
    sub.reserve(rest.size() - 2);
    for (std::size_t j = 1; j < rest.size(); ++j)
      if (j != i) sub.push_back(rest[j]);
    acc += c(first, partner) * matchings(c, sub);
  }
  return acc;
}

}  // namespace

double wick_moment(const GaussianSystem& system, std::span<const int> indices) {
  for (int i : indices)
    if (i < 0 || static_cast<std::size_t>(i) >= system.size())
      throw std::out_of_range("moment index outside the Gaussian system");
  if (indices.size() % 2) return 0.0;
  std::vector<int> rest(indices.begin(), indices.end());
  return matchings(system.covariance, rest);
}

SampleBatch sample(std::size_t dim, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample count must be positive");
  SampleBatch b;
  b.seed = seed;
  b.count = count;
  b.dim = dim;
  b.draws.resize(count * dim);
  parallel_for(count, [&](std::size_t s) {
    for (std::size_t c = 0; c < dim; ++c)
      b.draws[s * dim + c] = standard_normal(seed, s, c);
  });
  return b;
}

SampleBatch sample(const SpectralModel& model, std::size_t count,
                   std::uint64_t seed, int lie_dim) {
  if (lie_dim < 1) throw std::invalid_argument("lie dimension must be positive");
  return sample(model.size() * static_cast<std::size_t>(lie_dim), count, seed);
}

Estimate batch_means(std::span<const Complex> values, int batches) {
  Estimate e;
  e.count = values.size();
  if (values.empty()) return e;
  const std::size_t nb =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, batches)),
                            values.size());
  e.batches = static_cast<int>(nb);
  e.mean = pairwise_sum(values) / static_cast<double>(values.size());
  if (nb < 2) return e;

  std::vector<Complex> bm(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * values.size() / nb;
    const std::size_t hi = (b + 1) * values.size() / nb;
    bm[b] = pairwise_sum(values.subspan(lo, hi - lo)) /
            static_cast<double>(hi - lo);
  }
  const Complex centre = pairwise_sum(std::span<const Complex>(bm)) /
                         static_cast<double>(nb);
  double vr = 0.0, vi = 0.0;
  for (const Complex& m : bm) {
    vr += (m.real() - centre.real()) * (m.real() - centre.real());
    vi += (m.imag() - centre.imag()) * (m.imag() - centre.imag());
  }
  const double denom = static_cast<double>(nb) * static_cast<double>(nb - 1);
  e.se_real = std::sqrt(vr / denom);
  e.se_imag = std::sqrt(vi / denom);
  return e;
}

std::vector<std::vector<Complex>> process_weights(const CurrentPath& path,
                                                  const SpectralModel& model,
                                                  bool rk) {
  model.validate();
  path.validate(model.size());
  const std::vector<Complex> r = rk ? rk_coefficients(model) : std::vector<Complex>{};
  std::vector<std::vector<Complex>> w(path.times.size(),
                                      std::vector<Complex>(model.size()));
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const CurrentVector lifted =
        path.values[i].lifted ? path.values[i] : dual_lift(path.values[i], model);
    for (std::size_t j = 0; j < model.size(); ++j) {
      const double half = std::sqrt(1.0 / model.weight(j));  // (1+l^2)^{p/2}
      w[i][j] = half * lifted.coeffs[j] * (rk ? r[j] : Complex(1.0));
    }
  }
  return w;
}

ProcessRealization realize_process(const SampleBatch& batch,
                                   const CurrentPath& path,
                                   const SpectralModel& model, bool rk) {
  const auto w = process_weights(path, model, rk);
  const std::size_t modes = model.size();
  const std::size_t offset = static_cast<std::size_t>(path.lie_index) * modes;
  if (batch.dim < offset + modes)
    throw ValidationError("sample batch has too few coordinates for the path");
  ProcessRealization out;
  out.count = batch.count;
  out.times = path.times;
  const std::size_t nt = path.times.size();
  out.values.resize(batch.count * nt);
  for (std::size_t s = 0; s < batch.count; ++s) {
    const auto g = batch.row(s).subspan(offset, modes);
    for (std::size_t i = 0; i < nt; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < modes; ++j) acc += g[j] * w[i][j];
      out.values[s * nt + i] = acc;
    }
  }
  return out;
}

WilsonEstimate mc_wilson(const SampleBatch& batch,
                         std::span<const LoopCurrents> loops,
                         const SpectralModel& model, const RepBasis& basis,
                         int order, bool rk) {
  if (order < 0) throw std::invalid_argument("order must be nonnegative");
  if (loops.empty()) throw ValidationError("need at least one loop");
  model.validate();
  validate(basis);
  const std::size_t modes = model.size();
  const int n = basis.dim_rep;
  const int d = basis.dim_algebra();
  if (batch.dim < modes * static_cast<std::size_t>(d))
    throw ValidationError("sample batch needs J * dim_algebra coordinates");

  // Per loop: grid, and per component the weight increments per interval.
  struct Prepared {
    std::vector<double> times;
    std::vector<Matrix> background;
    std::vector<int> lie;
    std::vector<std::vector<std::vector<Complex>>> dw;  // [c][i][j]
  };
  std::vector<Prepared> prep(loops.size());
  for (std::size_t l = 0; l < loops.size(); ++l) {
    const LoopCurrents& lc = loops[l];
    Prepared& p = prep[l];
    if (lc.components.empty())
      throw ValidationError("each loop needs at least one current component");
    p.times = lc.components[0].times;
    for (const CurrentPath& c : lc.components) {
      if (c.times != p.times)
        throw ValidationError("current components of a loop must share a grid");
      if (c.lie_index >= d)
        throw ValidationError("lie index outside the basis");
      const auto w = process_weights(c, model, rk);
      std::vector<std::vector<Complex>> dw(w.size() - 1,
                                           std::vector<Complex>(modes));
      for (std::size_t i = 0; i + 1 < w.size(); ++i)
        for (std::size_t j = 0; j < modes; ++j) dw[i][j] = w[i + 1][j] - w[i][j];
      p.dw.push_back(std::move(dw));
      p.lie.push_back(c.lie_index);
    }
    const std::size_t intervals = p.times.size() - 1;
    if (!lc.background.empty() && lc.background.size() != intervals)
      throw ValidationError("background increments must match the grid");
    p.background = lc.background.empty()
                       ? std::vector<Matrix>(intervals, Matrix::Zero(n, n))
                       : lc.background;
    DrivingPath probe = DrivingPath::zero(p.times, n);
    probe.deterministic = p.background;
    probe.validate();
  }

  std::vector<Complex> values(batch.count);
  std::vector<double> tails(batch.count);
  parallel_for(batch.count, [&](std::size_t s) {
    const auto g = batch.row(s);
    std::vector<GradedHolonomy> hol;
    hol.reserve(prep.size());
    double tail = 0.0;
    for (const Prepared& p : prep) {
      DrivingPath path;
      path.times = p.times;
      path.deterministic = p.background;
      path.stochastic.assign(p.times.size() - 1, Matrix::Zero(n, n));
      for (std::size_t c = 0; c < p.dw.size(); ++c) {
        const auto coords = g.subspan(static_cast<std::size_t>(p.lie[c]) * modes, modes);
        const Matrix& e = basis.generators[p.lie[c]];
        for (std::size_t i = 0; i < path.stochastic.size(); ++i) {
          Complex inc = 0.0;
          for (std::size_t j = 0; j < modes; ++j) inc += coords[j] * p.dw[c][i][j];
          path.stochastic[i] += inc * e;
        }
      }
      hol.push_back(holonomy_graded(path, order));
      tail = std::max(tail, hol.back().truncation_tail_bound);
    }
    Complex v = 0.0;
    for (int m = 0; m <= order; ++m) v += wilson_slices(hol, m);
    values[s] = v;
    tails[s] = tail;
  });

  WilsonEstimate out;
  out.order = order;
  out.estimate = batch_means(values);
  out.tail_bound_mean =
      pairwise_sum(std::span<const double>(tails)) / static_cast<double>(tails.size());
  out.tail_bound_max = *std::max_element(tails.begin(), tails.end());
  return out;
}

}  // namespace wilsonline
