#include "ssc/random.hpp"

#include <cmath>

namespace ssc {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

CoordVector random_unit_vector(const CoordSpace& space, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CoordVector v(space.dim);
    double n = 0.0;
    while (!(n > 1e-12)) {
        for (auto& e : v) e = gauss(rng);
        n = norm(space, v);
    }
    for (auto& e : v) e /= n;
    return v;
}

CoordVector random_in_ball(const CoordSpace& space, std::span<const double> center, double radius,
                           Rng& rng) {
    // radial fraction capped below 1 so the point is strictly interior after rounding
    double frac = std::pow(uniform(rng, 0.0, 1.0), 1.0 / static_cast<double>(space.dim)) * 0.999;
    return scaled_add(center, radius * frac, random_unit_vector(space, rng));
}

CoordVector scaled_add(std::span<const double> base, double scale, std::span<const double> dir) {
    CoordVector out(base.begin(), base.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * dir[i];
    return out;
}

}  // namespace ssc
