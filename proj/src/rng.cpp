#include "wilsonline/rng.hpp"

#include <cmath>

#include "wilsonline/types.hpp"

namespace wilsonline {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  constexpr std::uint64_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = kM0 * c[0];
    const std::uint64_t p1 = kM1 * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

double standard_normal(std::uint64_t seed, std::uint64_t sample,
                       std::uint64_t coord) {
  const std::uint64_t pair = coord >> 1;
  const auto out = philox4x32(
      {static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32),
       static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(pair >> 32)},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  auto unit = [](std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits =
        ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;  // (0, 1)
  };
  const double u1 = unit(out[0], out[1]);
  const double u2 = unit(out[2], out[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * kPi * u2;
  return (coord & 1u) ? r * std::sin(angle) : r * std::cos(angle);
}

}  // namespace wilsonline
