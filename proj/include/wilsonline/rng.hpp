#pragma once

#include <array>
#include <cstdint>

namespace wilsonline {

// Philox4x32-10 (Salmon et al., SC'11). Stateless: the output is a pure
// function of (key, counter).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Standard normal keyed by (seed, sample index, coordinate index). Pairs of
// coordinates (2c, 2c + 1) share one Box-Muller draw.
double standard_normal(std::uint64_t seed, std::uint64_t sample,
                       std::uint64_t coord);

}  // namespace wilsonline
