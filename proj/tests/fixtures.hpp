#pragma once

#include <random>
#include <vector>

#include "wilsonline/geometry.hpp"
#include "wilsonline/lie_rep.hpp"
#include "wilsonline/signature.hpp"

namespace fixtures {

using namespace wilsonline;

// Unit circle in the xy-plane and unit circle in the xz-plane centred at
// (1, 0, 0), oriented so that the linking number is +1.
inline LoopCurve hopf_a(int hint = 512) {
  return LoopCurve::circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 1.0, hint);
}
inline LoopCurve hopf_b(int hint = 512) {
  return LoopCurve::circle(Vec3::UnitX(), Vec3::UnitX(), -Vec3::UnitZ(), 1.0, hint);
}

// Two (1, 2) curves on the torus of radii 2 and 1, offset by half a
// meridian turn: the (2, 4) torus link, linking number +2.
inline LoopCurve torus_component(int which, int hint = 512) {
  const double s = which == 0 ? 1.0 : -1.0;
  std::vector<Vec3> c(4, Vec3::Zero()), b(4, Vec3::Zero());
  c[1] = Vec3(2.0 + 0.5 * s, 0.0, 0.0);
  c[3] = Vec3(0.5 * s, 0.0, 0.0);
  b[1] = Vec3(0.0, 2.0 - 0.5 * s, 0.0);
  b[3] = Vec3(0.0, 0.5 * s, 0.0);
  b[2] = Vec3(0.0, 0.0, -s);
  return LoopCurve::fourier(c, b, hint);
}

inline Eigen::Matrix3d rotation(double a, double b, double c) {
  return (Eigen::AngleAxisd(a, Vec3::UnitZ()) *
          Eigen::AngleAxisd(b, Vec3::UnitY()) *
          Eigen::AngleAxisd(c, Vec3::UnitX()))
      .toRotationMatrix();
}

// Random real combination sum_a c_a E_a (anti-Hermitian).
inline Matrix random_algebra_element(const RepBasis& basis, std::mt19937_64& rng,
                                     double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m = Matrix::Zero(basis.dim_rep, basis.dim_rep);
  for (const Matrix& e : basis.generators) m += g(rng) * e;
  return m;
}

inline Matrix random_complex(int n, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Random path with algebra-valued increments on a uniform grid.
inline DrivingPath random_algebra_path(const RepBasis& basis, int intervals,
                                       std::mt19937_64& rng, double det_scale,
                                       double sto_scale) {
  DrivingPath p = DrivingPath::zero(DrivingPath::uniform_grid(intervals),
                                    basis.dim_rep);
  for (int i = 0; i < intervals; ++i) {
    p.deterministic[i] = random_algebra_element(basis, rng, det_scale);
    p.stochastic[i] = random_algebra_element(basis, rng, sto_scale);
  }
  return p;
}

}  // namespace fixtures
