#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "wilsonline/geometry.hpp"

namespace wilsonline {

struct LinkResult {
  double value_gauss = 0.0;
  std::optional<long> value_crossing;  // polyline pairs only
  double separation = 0.0;
  int grid = 0;
};

// Gauss linking integral
//   (1/4 pi) int int det[g1'(s), g2'(t), g1(s) - g2(t)] / |g1(s) - g2(t)|^3
// by the periodic trapezoid rule on a grid x grid product. Right-handed
// crossings count +1. Throws ValidationError when the loops touch.
double linking_gauss(const LoopCurve& a, const LoopCurve& b, int grid);

// Signed crossing count of the projection along `direction`, halved.
// Both loops must be polylines. Non-generic projections are retried with
// deterministic perturbations of the direction (16 attempts).
long linking_crossing(const LoopCurve& a, const LoopCurve& b,
                      const Vec3& direction = Vec3(0.0, 0.0, 1.0));

// Both routes where available.
LinkResult link(const LoopCurve& a, const LoopCurve& b, int grid);

nlohmann::json to_json(const LinkResult& r);

}  // namespace wilsonline
