#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wilsonline/quadrature.hpp"
#include "wilsonline/types.hpp"

namespace wilsonline {

// Closed curve gamma : [0, 1] -> R^3 with gamma(0) = gamma(1).
//
// Fourier form: gamma(t) = sum_k a_k cos(2 pi k t) + b_k sin(2 pi k t) with
// vector coefficients a_k, b_k (b_0 ignored).
// Polyline form: vertices with implicit closure, parametrized by normalized
// arc length; the derivative at a vertex is the one of the outgoing segment.
class LoopCurve {
 public:
  enum class Form { fourier, polyline };

  static LoopCurve fourier(std::vector<Vec3> cos_coeffs,
                           std::vector<Vec3> sin_coeffs,
                           int samples_hint = 512);
  static LoopCurve polyline(std::vector<Vec3> vertices,
                            int samples_hint = 512);

  // Unit circle of radius r in the plane spanned by orthonormal u, v.
  static LoopCurve circle(const Vec3& center, const Vec3& u, const Vec3& v,
                          double radius = 1.0, int samples_hint = 512);

  Form form() const { return form_; }
  int samples_hint() const { return samples_hint_; }

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;

  // Same curve traversed backwards: t -> 1 - t.
  LoopCurve reversed() const;
  // Same curve traversed `times` times over [0, 1].
  LoopCurve repeated(int times) const;
  // x -> rotation * x + shift.
  LoopCurve transformed(const Eigen::Matrix3d& rotation,
                        const Vec3& shift) const;
  // Polyline through `segments` equally spaced parameter samples.
  LoopCurve to_polyline(int segments) const;

  const std::vector<Vec3>& cos_coeffs() const { return cos_; }
  const std::vector<Vec3>& sin_coeffs() const { return sin_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }

 private:
  LoopCurve() = default;
  void check_parameter(double t) const;
  std::size_t segment_at(double t) const;

  Form form_ = Form::fourier;
  int samples_hint_ = 512;
  std::vector<Vec3> cos_, sin_;
  std::vector<Vec3> vertices_;
  std::vector<double> cumulative_;  // normalized arc length at each vertex
  double length_ = 0.0;
};

// Scalar-coefficient 1-form A = sum_i A_i(x) dx^i on R^3.
struct SmoothOneForm {
  std::function<Vec3(const Vec3&)> eval;
  std::string label;
};

// Radial bump phi(x) = c (1 - |x|^2)^3 on the unit ball, c = 315 / (64 pi),
// scaled as phi_eps(x) = eps^-3 phi(x / eps).
// Ball quadrature: product Gauss-Legendre in r, cos(theta) and phi, at least
// 5 nodes per axis.
class Mollifier {
 public:
  explicit Mollifier(double epsilon, int quadrature_order = 8);

  double epsilon() const { return epsilon_; }
  int quadrature_order() const { return order_; }

  // phi(y) for the unscaled profile.
  static double profile(const Vec3& y);

  // (A * phi_eps)(x) = int A(x + eps y) phi(y) dy.
  Vec3 smooth(const SmoothOneForm& form, const Vec3& x) const;

  // int phi under the ball quadrature.
  double unit_mass() const;

 private:
  double epsilon_;
  int order_;
  std::vector<Vec3> points_;    // unit-ball nodes
  std::vector<double> weights_;  // phi(y) dy folded in
};

// int_s^t A(gamma(tau)) . gamma'(tau) dtau, composite Simpson on `grid`
// subintervals of [s, t] (rounded up to even).
double line_integral(const LoopCurve& loop, const SmoothOneForm& form,
                     double s, double t, int grid);

// Same pairing against the mollified form A * phi_eps.
double mollified_line_integral(const LoopCurve& loop,
                               const SmoothOneForm& form,
                               const Mollifier& moll, double s, double t,
                               int grid);

// Largest difference quotient of t -> pairing(0, t) over a uniform grid.
double lipschitz_constant(const LoopCurve& loop, const SmoothOneForm& form,
                          int grid);
double lipschitz_constant(const LoopCurve& loop, const SmoothOneForm& form,
                          const Mollifier& moll, int grid);

struct Separation {
  double distance = 0.0;
  bool intersecting = false;
};

// min |gamma1(s) - gamma2(t)| over the product of the two sample grids.
// Distances below 1e-9 are reported as zero with intersecting = true.
Separation tube_separation(const LoopCurve& a, const LoopCurve& b);

LoopCurve loop_from_json(const nlohmann::json& doc);
nlohmann::json loop_to_json(const LoopCurve& loop);

}  // namespace wilsonline
