#include "wilsonline/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace wilsonline {

LoopCurve LoopCurve::fourier(std::vector<Vec3> cos_coeffs,
                             std::vector<Vec3> sin_coeffs,
                             int samples_hint) {
  if (samples_hint < 1) throw ValidationError("samples_hint must be positive");
  const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  if (n == 0) throw ValidationError("Fourier loop needs coefficients");
  cos_coeffs.resize(n, Vec3::Zero());
  sin_coeffs.resize(n, Vec3::Zero());
  sin_coeffs[0].setZero();
  LoopCurve c;
  c.form_ = Form::fourier;
  c.samples_hint_ = samples_hint;
  c.cos_ = std::move(cos_coeffs);
  c.sin_ = std::move(sin_coeffs);

  // Speed must not vanish on the evaluation grid.
  for (int i = 0; i < samples_hint; ++i) {
    if (c.velocity(static_cast<double>(i) / samples_hint).norm() <= 1e-12)
      throw ValidationError("Fourier loop has zero speed on the sample grid");
  }
  return c;
}

LoopCurve LoopCurve::polyline(std::vector<Vec3> vertices, int samples_hint) {
  if (samples_hint < 1) throw ValidationError("samples_hint must be positive");
  if (vertices.size() < 3)
    throw ValidationError("polyline loop needs at least 3 vertices");
  LoopCurve c;
  c.form_ = Form::polyline;
  c.samples_hint_ = samples_hint;
  c.vertices_ = std::move(vertices);
  const std::size_t n = c.vertices_.size();
  c.cumulative_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double len = (c.vertices_[(i + 1) % n] - c.vertices_[i]).norm();
    if (len <= 0.0) throw ValidationError("polyline has a repeated vertex");
    c.cumulative_[i + 1] = c.cumulative_[i] + len;
  }
  c.length_ = c.cumulative_[n];
  for (double& s : c.cumulative_) s /= c.length_;
  c.cumulative_[n] = 1.0;
  return c;
}

LoopCurve LoopCurve::circle(const Vec3& center, const Vec3& u, const Vec3& v,
                            double radius, int samples_hint) {
  return fourier({center, radius * u}, {Vec3::Zero(), radius * v},
                 samples_hint);
}

void LoopCurve::check_parameter(double t) const {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("loop parameter must lie in [0, 1]");
}

std::size_t LoopCurve::segment_at(double t) const {
  const std::size_t n = vertices_.size();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), t);
  std::size_t seg = static_cast<std::size_t>(it - cumulative_.begin());
  seg = seg == 0 ? 0 : seg - 1;
  return std::min(seg, n - 1);
}

Vec3 LoopCurve::position(double t) const {
  check_parameter(t);
  if (form_ == Form::fourier) {
    Vec3 p = cos_[0];
    for (std::size_t k = 1; k < cos_.size(); ++k) {
      const double w = 2.0 * kPi * static_cast<double>(k) * t;
      p += std::cos(w) * cos_[k] + std::sin(w) * sin_[k];
    }
    return p;
  }
  const std::size_t n = vertices_.size();
  const std::size_t i = segment_at(t);
  const double lo = cumulative_[i], hi = cumulative_[i + 1];
  const double u = (t - lo) / (hi - lo);
  return (1.0 - u) * vertices_[i] + u * vertices_[(i + 1) % n];
}

Vec3 LoopCurve::velocity(double t) const {
  check_parameter(t);
  if (form_ == Form::fourier) {
    Vec3 v = Vec3::Zero();
    for (std::size_t k = 1; k < cos_.size(); ++k) {
      const double f = 2.0 * kPi * static_cast<double>(k);
      v += f * (-std::sin(f * t) * cos_[k] + std::cos(f * t) * sin_[k]);
    }
    return v;
  }
  const std::size_t n = vertices_.size();
  const std::size_t i = segment_at(t);
  const Vec3 d = vertices_[(i + 1) % n] - vertices_[i];
  return d / (cumulative_[i + 1] - cumulative_[i]);
}

LoopCurve LoopCurve::reversed() const {
  if (form_ == Form::fourier) {
    std::vector<Vec3> s = sin_;
    for (Vec3& b : s) b = -b;
    return fourier(cos_, s, samples_hint_);
  }
  std::vector<Vec3> v(vertices_.size());
  v[0] = vertices_[0];
  std::reverse_copy(vertices_.begin() + 1, vertices_.end(), v.begin() + 1);
  return polyline(v, samples_hint_);
}

LoopCurve LoopCurve::repeated(int times) const {
  if (times < 1) throw std::invalid_argument("repeat count must be positive");
  if (form_ == Form::fourier) {
    const std::size_t n = cos_.size();
    std::vector<Vec3> c((n - 1) * times + 1, Vec3::Zero());
    std::vector<Vec3> s(c.size(), Vec3::Zero());
    c[0] = cos_[0];
    for (std::size_t k = 1; k < n; ++k) {
      c[k * times] = cos_[k];
      s[k * times] = sin_[k];
    }
    return fourier(c, s, samples_hint_);
  }
  // Vertex lists may revisit points; only consecutive repeats are illegal.
  std::vector<Vec3> v;
  for (int r = 0; r < times; ++r)
    v.insert(v.end(), vertices_.begin(), vertices_.end());
  return polyline(v, samples_hint_);
}

LoopCurve LoopCurve::transformed(const Eigen::Matrix3d& rotation,
                                 const Vec3& shift) const {
  if (form_ == Form::fourier) {
    std::vector<Vec3> c = cos_, s = sin_;
    for (Vec3& a : c) a = rotation * a;
    for (Vec3& b : s) b = rotation * b;
    c[0] += shift;
    return fourier(c, s, samples_hint_);
  }
  std::vector<Vec3> v = vertices_;
  for (Vec3& p : v) p = rotation * p + shift;
  return polyline(v, samples_hint_);
}

LoopCurve LoopCurve::to_polyline(int segments) const {
  if (segments < 3) throw std::invalid_argument("need at least 3 segments");
  std::vector<Vec3> v;
  v.reserve(static_cast<std::size_t>(segments));
  for (int i = 0; i < segments; ++i)
    v.push_back(position(static_cast<double>(i) / segments));
  return polyline(v, samples_hint_);
}

Mollifier::Mollifier(double epsilon, int quadrature_order)
    : epsilon_(epsilon), order_(quadrature_order) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  // r^2 (1 - r^2)^3 has degree 8; fewer nodes cannot integrate it exactly.
  if (order_ < 5) throw std::invalid_argument("quadrature order must be at least 5");
  const QuadratureRule radial = gauss_legendre(order_, 0.0, 1.0);
  const QuadratureRule polar = gauss_legendre(order_, -1.0, 1.0);
  const QuadratureRule azimuth = gauss_legendre(order_, 0.0, 2.0 * kPi);
  for (int a = 0; a < order_; ++a) {
    const double r = radial.nodes[a];
    for (int b = 0; b < order_; ++b) {
      const double ct = polar.nodes[b];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int c = 0; c < order_; ++c) {
        const double ph = azimuth.nodes[c];
        const Vec3 y(r * st * std::cos(ph), r * st * std::sin(ph), r * ct);
        points_.push_back(y);
        weights_.push_back(radial.weights[a] * polar.weights[b] *
                           azimuth.weights[c] * r * r * profile(y));
      }
    }
  }
}

double Mollifier::profile(const Vec3& y) {
  const double r2 = y.squaredNorm();
  if (r2 >= 1.0) return 0.0;
  const double u = 1.0 - r2;
  return 315.0 / (64.0 * kPi) * u * u * u;
}

Vec3 Mollifier::smooth(const SmoothOneForm& form, const Vec3& x) const {
  Vec3 acc = Vec3::Zero();
  for (std::size_t i = 0; i < points_.size(); ++i)
    acc += weights_[i] * form.eval(x + epsilon_ * points_[i]);
  return acc;
}

double Mollifier::unit_mass() const {
  double m = 0.0;
  for (double w : weights_) m += w;
  return m;
}

namespace {

template <class Density>
double simpson(Density&& f, double s, double t, int grid) {
  if (s > t) throw std::domain_error("line integral needs s <= t");
  if (s < 0.0 || t > 1.0)
    throw std::domain_error("line integral bounds must lie in [0, 1]");
  if (s == t) return 0.0;
  int n = std::max(2, grid);
  if (n % 2) ++n;
  const double h = (t - s) / n;
  double acc = f(s) + f(t);
  for (int i = 1; i < n; ++i) {
    const double tau = i == n ? t : s + i * h;
    acc += (i % 2 ? 4.0 : 2.0) * f(tau);
  }
  return acc * h / 3.0;
}

template <class Density>
double max_quotient(Density&& f, int grid) {
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  const double h = 1.0 / grid;
  double best = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double a = i * h, b = (i + 1 == grid) ? 1.0 : (i + 1) * h;
    const double piece = (f(a) + 4.0 * f(0.5 * (a + b)) + f(b)) * (b - a) / 6.0;
    best = std::max(best, std::abs(piece) / (b - a));
  }
  return best;
}

}  // namespace

double line_integral(const LoopCurve& loop, const SmoothOneForm& form,
                     double s, double t, int grid) {
  return simpson(
      [&](double tau) {
        return form.eval(loop.position(tau)).dot(loop.velocity(tau));
      },
      s, t, grid);
}

double mollified_line_integral(const LoopCurve& loop,
                               const SmoothOneForm& form,
                               const Mollifier& moll, double s, double t,
                               int grid) {
  return simpson(
      [&](double tau) {
        return moll.smooth(form, loop.position(tau)).dot(loop.velocity(tau));
      },
      s, t, grid);
}

double lipschitz_constant(const LoopCurve& loop, const SmoothOneForm& form,
                          int grid) {
  return max_quotient(
      [&](double tau) {
        return form.eval(loop.position(tau)).dot(loop.velocity(tau));
      },
      grid);
}

double lipschitz_constant(const LoopCurve& loop, const SmoothOneForm& form,
                          const Mollifier& moll, int grid) {
  return max_quotient(
      [&](double tau) {
        return moll.smooth(form, loop.position(tau)).dot(loop.velocity(tau));
      },
      grid);
}

Separation tube_separation(const LoopCurve& a, const LoopCurve& b) {
  const int na = a.samples_hint(), nb = b.samples_hint();
  std::vector<Vec3> pb(static_cast<std::size_t>(nb));
  for (int j = 0; j < nb; ++j) pb[j] = b.position(static_cast<double>(j) / nb);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < na; ++i) {
    const Vec3 p = a.position(static_cast<double>(i) / na);
    for (const Vec3& q : pb) best = std::min(best, (p - q).squaredNorm());
  }
  Separation out;
  out.distance = std::sqrt(best);
  if (out.distance < 1e-9) {
    out.distance = 0.0;
    out.intersecting = true;
  }
  return out;
}

namespace {

std::vector<double> coeff_column(const nlohmann::json& pairs, int which) {
  std::vector<double> out;
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2)
      throw ValidationError("Fourier coefficients must be [cos, sin] pairs");
    out.push_back(p[which].get<double>());
  }
  return out;
}

}  // namespace

LoopCurve loop_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("form"))
    throw ValidationError("loop document needs a form field");
  const int hint = doc.value("samples_hint", 512);
  const std::string form = doc.at("form").get<std::string>();
  if (form == "fourier") {
    const auto& cf = doc.at("coeffs");
    std::size_t n = 0;
    for (const char* axis : {"x", "y", "z"})
      if (cf.contains(axis)) n = std::max(n, cf.at(axis).size());
    std::vector<Vec3> c(n, Vec3::Zero()), s(n, Vec3::Zero());
    for (int axis = 0; axis < 3; ++axis) {
      const char* key = axis == 0 ? "x" : axis == 1 ? "y" : "z";
      if (!cf.contains(key)) continue;
      const auto cc = coeff_column(cf.at(key), 0);
      const auto ss = coeff_column(cf.at(key), 1);
      for (std::size_t k = 0; k < cc.size(); ++k) {
        c[k][axis] = cc[k];
        s[k][axis] = ss[k];
      }
    }
    return LoopCurve::fourier(c, s, hint);
  }
  if (form == "polyline") {
    std::vector<Vec3> v;
    for (const auto& p : doc.at("vertices")) {
      if (!p.is_array() || p.size() != 3)
        throw ValidationError("polyline vertices must be [x, y, z]");
      v.emplace_back(p[0].get<double>(), p[1].get<double>(),
                     p[2].get<double>());
    }
    return LoopCurve::polyline(v, hint);
  }
  throw ValidationError("unknown loop form: " + form);
}

nlohmann::json loop_to_json(const LoopCurve& loop) {
  nlohmann::json doc;
  doc["samples_hint"] = loop.samples_hint();
  if (loop.form() == LoopCurve::Form::fourier) {
    doc["form"] = "fourier";
    for (int axis = 0; axis < 3; ++axis) {
      nlohmann::json pairs = nlohmann::json::array();
      for (std::size_t k = 0; k < loop.cos_coeffs().size(); ++k)
        pairs.push_back(
            {loop.cos_coeffs()[k][axis], loop.sin_coeffs()[k][axis]});
      doc["coeffs"][axis == 0 ? "x" : axis == 1 ? "y" : "z"] = pairs;
    }
  } else {
    doc["form"] = "polyline";
    nlohmann::json v = nlohmann::json::array();
    for (const Vec3& p : loop.vertices()) v.push_back({p[0], p[1], p[2]});
    doc["vertices"] = v;
  }
  return doc;
}

}  // namespace wilsonline
