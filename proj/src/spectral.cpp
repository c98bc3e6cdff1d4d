#include "wilsonline/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "wilsonline/parallel.hpp"

namespace wilsonline {

namespace {

void require_same_size(const CurrentVector& u, const CurrentVector& v,
                       const SpectralModel& model) {
  if (u.coeffs.size() != model.size() || v.coeffs.size() != model.size())
    throw std::invalid_argument("current vector length must match the spectrum");
}

}  // namespace

double SpectralModel::weight(std::size_t j) const {
  const double l = eigenvalues.at(j);
  return std::pow(1.0 + l * l, -static_cast<double>(p));
}

double SpectralModel::rho() const {
  double r = std::numeric_limits<double>::infinity();
  for (double l : eigenvalues) r = std::min(r, std::abs(l));
  return r;
}

double SpectralModel::summability_proxy() const {
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j)
    s += weight(j) * std::abs(eigenvalues[j]);
  return s;
}

void SpectralModel::validate() const {
  if (eigenvalues.empty()) throw ValidationError("spectrum is empty");
  for (double l : eigenvalues)
    if (!(std::abs(l) > 0.0) || !std::isfinite(l))
      throw ValidationError("eigenvalues must be finite and nonzero");
  if (p < 0) throw ValidationError("weight exponent p must be nonnegative");
  if (!(k > 0.0)) throw ValidationError("level k must be positive");
  if (n && !(*n > 0.0)) throw ValidationError("regulator n must be positive");
}

SpectralModel SpectralModel::symmetric_preset(int modes, int p, double k,
                                              std::optional<double> n) {
  if (modes < 2 || modes % 2)
    throw std::invalid_argument("symmetric preset needs an even mode count");
  SpectralModel m;
  for (int i = 1; i <= modes / 2; ++i) {
    m.eigenvalues.push_back(i);
    m.eigenvalues.push_back(-i);
  }
  m.p = p;
  m.k = k;
  m.n = n;
  m.validate();
  return m;
}

SpectralModel SpectralModel::single_sign_preset(int modes, int p, double k,
                                                std::optional<double> n) {
  if (modes < 1) throw std::invalid_argument("need at least one mode");
  SpectralModel m;
  for (int i = 1; i <= modes; ++i) m.eigenvalues.push_back(i);
  m.p = p;
  m.k = k;
  m.n = n;
  m.validate();
  return m;
}

double CurrentPath::lipschitz_bound() const {
  double best = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    for (std::size_t j = 0; j < values[i].coeffs.size(); ++j)
      best = std::max(best, std::abs(values[i].coeffs[j] -
                                     values[i - 1].coeffs[j]) / dt);
  }
  return best;
}

void CurrentPath::validate(std::size_t modes) const {
  if (times.size() < 2 || times.size() != values.size())
    throw ValidationError("current path needs one value per grid time");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw ValidationError("current path grid must be strictly increasing");
  for (const auto& v : values)
    if (v.coeffs.size() != modes)
      throw ValidationError("current coefficients must match the spectrum");
  if (lie_index < 0) throw ValidationError("lie index must be nonnegative");
}

double inner_p(const CurrentVector& u, const CurrentVector& v,
               const SpectralModel& model) {
  require_same_size(u, v, model);
  double acc = 0.0;
  for (std::size_t j = 0; j < model.size(); ++j)
    acc += u.coeffs[j] * v.coeffs[j] / model.weight(j);
  return acc;
}

CurrentVector dual_lift(const CurrentVector& u, const SpectralModel& model) {
  if (u.coeffs.size() != model.size())
    throw std::invalid_argument("current vector length must match the spectrum");
  if (u.lifted) throw std::invalid_argument("current is already lifted");
  CurrentVector out;
  out.lifted = true;
  out.coeffs.resize(u.coeffs.size());
  for (std::size_t j = 0; j < model.size(); ++j)
    out.coeffs[j] = model.weight(j) * u.coeffs[j];
  return out;
}

std::vector<Complex> rk_coefficients(const SpectralModel& model) {
  if (!(model.k > 0.0)) throw std::invalid_argument("level k must be positive");
  const Complex i{0.0, 1.0};
  std::vector<Complex> r(model.size());
  for (std::size_t j = 0; j < model.size(); ++j) {
    const double a = model.weight(j) * model.eigenvalues[j];
    if (model.n) {
      const double n = *model.n;
      r[j] = std::sqrt(n) / std::sqrt(1.0 - 2.0 * i * n * model.k * a);
    } else {
      r[j] = 1.0 / std::sqrt(-2.0 * i * model.k * a);
    }
  }
  return r;
}

Complex z_normalizer(const SpectralModel& model) {
  if (!model.n)
    throw std::invalid_argument("normalizer is defined for finite n only");
  const Complex i{0.0, 1.0};
  Complex z = 1.0;
  for (std::size_t j = 0; j < model.size(); ++j) {
    const double a = model.weight(j) * model.eigenvalues[j];
    z /= std::sqrt(1.0 - 2.0 * i * (*model.n) * model.k * a);
  }
  return z;
}

double cs_form(std::span<const double> coords, const SpectralModel& model) {
  if (coords.size() != model.size())
    throw std::invalid_argument("coordinate count must match the spectrum");
  double acc = 0.0;
  for (std::size_t j = 0; j < model.size(); ++j)
    acc += model.weight(j) * model.eigenvalues[j] * coords[j] * coords[j];
  return acc;
}

Complex covariance_rk(const CurrentVector& u, const CurrentVector& v,
                      const SpectralModel& model) {
  require_same_size(u, v, model);
  if (u.lifted || v.lifted)
    throw std::invalid_argument("covariance takes unlifted currents");
  if (model.n)
    throw std::invalid_argument("covariance_rk is the n = infinity limit");
  const Complex i{0.0, 1.0};
  const std::vector<Complex> r = rk_coefficients(model);

  // Route (i): (R_k u~, R_k v~)_p with the h_j-coordinates of u~ equal to
  // (1 + lambda^2)^{p/2} u~_j = (1 + lambda^2)^{-p/2} u_j.
  Complex via_rk = 0.0;
  // Route (ii): -(1/2ik) (u, Q^{-1} v).
  double pairing = 0.0;
  for (std::size_t j = 0; j < model.size(); ++j) {
    via_rk += r[j] * r[j] * model.weight(j) * u.coeffs[j] * v.coeffs[j];
    pairing += u.coeffs[j] * v.coeffs[j] / model.eigenvalues[j];
  }
  const Complex closed = -pairing / (2.0 * i * model.k);
  const double scale = std::max(1.0, std::abs(closed));
  if (std::abs(via_rk - closed) > 1e-10 * scale)
    throw InvariantViolation("covariance routes disagree: R_k route gives (" +
                             std::to_string(via_rk.real()) + ", " +
                             std::to_string(via_rk.imag()) +
                             "), closed form gives (" +
                             std::to_string(closed.real()) + ", " +
                             std::to_string(closed.imag()) + ")");
  return closed;
}

Complex fresnel_quadrature(double a) {
  using boost::math::quadrature::gauss_kronrod;
  // Even integrand; exp(-y^2/2) < 1e-31 beyond y = 12.
  const double cut = 12.0;
  const double norm = 2.0 / std::sqrt(2.0 * kPi);
  auto re = [a](double y) { return std::cos(a * y * y) * std::exp(-0.5 * y * y); };
  auto im = [a](double y) { return std::sin(a * y * y) * std::exp(-0.5 * y * y); };

  // Panels between zeros of the phase, y_m = sqrt(m pi / |a|), and no wider
  // than 1, so each panel sees at most one oscillation and a single
  // 61-point Kronrod pass resolves it.
  std::vector<double> edges{0.0};
  const double step = kPi / std::abs(a);  // inf for a = 0
  std::size_t m = 1;
  while (edges.back() < cut) {
    const double zero = std::sqrt(static_cast<double>(m) * step);
    const double next = std::min({zero, edges.back() + 1.0, cut});
    if (next == zero) ++m;
    edges.push_back(next);
  }
  std::vector<double> r(edges.size() - 1), s(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    r[i] = gauss_kronrod<double, 61>::integrate(re, edges[i], edges[i + 1], 0);
    s[i] = gauss_kronrod<double, 61>::integrate(im, edges[i], edges[i + 1], 0);
  }
  return norm * Complex(pairwise_sum<double>(r), pairwise_sum<double>(s));
}

SpectralModel spectrum_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("eigenvalues"))
    throw ValidationError("spectrum document needs eigenvalues");
  SpectralModel m;
  m.eigenvalues = doc.at("eigenvalues").get<std::vector<double>>();
  m.p = doc.value("p", 1);
  m.k = doc.value("k", 1.0);
  if (doc.contains("n")) {
    const auto& n = doc.at("n");
    if (n.is_string()) {
      if (n.get<std::string>() != "inf")
        throw ValidationError("regulator n must be a number or \"inf\"");
    } else {
      m.n = n.get<double>();
    }
  }
  m.validate();
  return m;
}

nlohmann::json spectrum_to_json(const SpectralModel& model) {
  nlohmann::json j{{"eigenvalues", model.eigenvalues},
                   {"p", model.p},
                   {"k", model.k}};
  j["n"] = model.n ? nlohmann::json(*model.n) : nlohmann::json("inf");
  return j;
}

}  // namespace wilsonline
