#include "wilsonline/topology.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "wilsonline/parallel.hpp"

namespace wilsonline {

double linking_gauss(const LoopCurve& a, const LoopCurve& b, int grid) {
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  const Separation sep = tube_separation(a, b);
  if (sep.intersecting)
    throw ValidationError("loops intersect; linking number undefined");

  const auto n = static_cast<std::size_t>(grid);
  std::vector<Vec3> pa(n), va(n), pb(n), vb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / grid;
    pa[i] = a.position(t);
    va[i] = a.velocity(t);
    pb[i] = b.position(t);
    vb[i] = b.velocity(t);
  }
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> terms(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Vec3 r = pa[i] - pb[j];
      const double d = r.norm();
      terms[j] = r.dot(va[i].cross(vb[j])) / (d * d * d);
    }
    rows[i] = pairwise_sum(std::span<const double>(terms));
  });
  const double h = 1.0 / grid;
  return pairwise_sum(std::span<const double>(rows)) * h * h / (4.0 * kPi);
}

namespace {

struct Degenerate {};

// Half the signed crossing sum, or Degenerate for a non-generic view.
long crossings_along(const std::vector<Vec3>& va, const std::vector<Vec3>& vb,
                     const Vec3& dir) {
  const Vec3 d = dir.normalized();
  const Vec3 helper =
      std::abs(d.x()) < 0.9 ? Vec3(1.0, 0.0, 0.0) : Vec3(0.0, 1.0, 0.0);
  const Vec3 e1 = d.cross(helper).normalized();
  const Vec3 e2 = d.cross(e1);
  auto proj = [&](const Vec3& p) { return Eigen::Vector2d(p.dot(e1), p.dot(e2)); };
  auto cross2 = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
    return u.x() * v.y() - u.y() * v.x();
  };

  constexpr double kTol = 1e-9;
  long total = 0;
  const std::size_t na = va.size(), nb = vb.size();
  for (std::size_t i = 0; i < na; ++i) {
    const Vec3& p0 = va[i];
    const Vec3 r = va[(i + 1) % na] - p0;
    const Eigen::Vector2d P = proj(p0), Rr = proj(r);
    for (std::size_t j = 0; j < nb; ++j) {
      const Vec3& q0 = vb[j];
      const Vec3 s = vb[(j + 1) % nb] - q0;
      const Eigen::Vector2d Q = proj(q0), S = proj(s);
      const double denom = cross2(Rr, S);
      const Eigen::Vector2d qp = Q - P;
      if (std::abs(denom) <= kTol * Rr.norm() * S.norm()) {
        // Parallel in projection: degenerate only if the lines overlap.
        if (std::abs(cross2(qp, Rr)) <= kTol * Rr.norm() * (qp.norm() + 1.0))
          throw Degenerate{};
        continue;
      }
      const double u = cross2(qp, S) / denom;
      const double v = cross2(qp, Rr) / denom;
      if (u < -kTol || u > 1.0 + kTol || v < -kTol || v > 1.0 + kTol) continue;
      if (u < kTol || u > 1.0 - kTol || v < kTol || v > 1.0 - kTol)
        throw Degenerate{};  // crossing through a vertex
      const double ha = (p0 + u * r).dot(d);
      const double hb = (q0 + v * s).dot(d);
      if (std::abs(ha - hb) < 1e-12)
        throw ValidationError("loops intersect; linking number undefined");
      const Vec3& over = ha > hb ? r : s;
      const Vec3& under = ha > hb ? s : r;
      total += over.cross(under).dot(d) > 0.0 ? 1 : -1;
    }
  }
  if (total % 2 != 0) throw Degenerate{};
  return total / 2;
}

}  // namespace

long linking_crossing(const LoopCurve& a, const LoopCurve& b,
                      const Vec3& direction) {
  if (a.form() != LoopCurve::Form::polyline ||
      b.form() != LoopCurve::Form::polyline)
    throw std::invalid_argument("crossing count needs polyline loops");
  if (direction.norm() == 0.0)
    throw std::invalid_argument("projection direction must be nonzero");
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> jitter(0.0, 1e-3);
  Vec3 dir = direction.normalized();
  for (int attempt = 0; attempt <= 16; ++attempt) {
    try {
      return crossings_along(a.vertices(), b.vertices(), dir);
    } catch (const Degenerate&) {
      dir = (direction.normalized() +
             Vec3(jitter(rng), jitter(rng), jitter(rng)) * (attempt + 1))
                .normalized();
    }
  }
  throw std::runtime_error("no generic projection found after 16 retries");
}

LinkResult link(const LoopCurve& a, const LoopCurve& b, int grid) {
  LinkResult r;
  r.grid = grid;
  r.separation = tube_separation(a, b).distance;
  r.value_gauss = linking_gauss(a, b, grid);
  if (a.form() == LoopCurve::Form::polyline &&
      b.form() == LoopCurve::Form::polyline)
    r.value_crossing = linking_crossing(a, b);
  return r;
}

nlohmann::json to_json(const LinkResult& r) {
  nlohmann::json j{{"value_gauss", r.value_gauss},
                   {"separation", r.separation},
                   {"grid", r.grid}};
  j["value_crossing"] =
      r.value_crossing ? nlohmann::json(*r.value_crossing) : nlohmann::json();
  return j;
}

}  // namespace wilsonline
