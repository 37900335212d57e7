#pragma once

#include <cstdint>
#include <random>

#include "ssc/core_space.hpp"

namespace ssc {

using Rng = std::mt19937_64;

/// splitmix64 step; used to give every shard/level its own stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Vector of norm exactly 1 (up to rounding) in the given coordinate norm.
CoordVector random_unit_vector(const CoordSpace& space, Rng& rng);

/// Point strictly inside the open ball B(center, radius).
CoordVector random_in_ball(const CoordSpace& space, std::span<const double> center, double radius,
                           Rng& rng);

CoordVector scaled_add(std::span<const double> base, double scale, std::span<const double> dir);

double uniform(Rng& rng, double lo, double hi);
std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive

}  // namespace ssc
