#pragma once

// Data-parallel inner loops. Each kernel has a straightforward serial
// reference in `serial::` that the tests compare against, and an OpenMP
// version in `parallel::` that the library uses.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ssc/core_space.hpp"
#include "ssc/traces.hpp"

namespace ssc::kernels {

/// Scalar lattice lo + k·step, k = 0..K, on every scalar axis.
struct Grid {
    double lo = -3.0;
    double hi = 3.0;
    double step = 0.01;

    std::size_t count() const;  // K + 1
    double at(std::size_t k) const { return lo + static_cast<double>(k) * step; }
};

/// Distance from y to ∏_i B[centers_i, inflate_i] in the max-of-norms metric.
struct DistanceTarget {
    FinitePoint centers;
    std::vector<double> inflate;  // 0 for a point target

    static DistanceTarget point(FinitePoint u);
    double distance(std::span<const CoordSpace> spaces, std::span<const double> flat_y) const;
};

using FlatPredicate = std::function<bool(std::span<const double>)>;
using FlatFunction = std::function<double(std::span<const double>)>;

/// Sphere samples of `resolution` spacing on the cube surface project to a
/// set whose covering radius in the coordinate norm is at most this.
double sphere_sample_resolution(std::size_t dim, double resolution);

namespace serial {

/// Minimum of target distance over grid points satisfying the predicate,
/// by full enumeration. nullopt when no grid point qualifies.
std::optional<double> grid_min_distance(std::span<const CoordSpace> spaces, const DistanceTarget& target,
                                        const FlatPredicate& predicate, const Grid& grid);

/// max − min of f over the lattice center + k·step with |k·step| <= half_width
/// on each scalar axis.
double grid_oscillation(std::span<const CoordSpace> spaces, const FlatFunction& f,
                        std::span<const double> center, std::span<const double> half_widths, double step);

/// min over sampled unit-sphere points s of ‖v − s‖.
double sphere_distance(const CoordSpace& space, std::span<const double> v, double resolution);

/// max_i term(i) for i < count (0 when count == 0).
double sampled_sup(std::size_t count, const std::function<double(std::size_t)>& term);

/// out[i] = term(i).
std::vector<double> evaluate_batch(std::size_t count, const std::function<double(std::size_t)>& term);

}  // namespace serial

namespace parallel {

/// Same result as the serial version; searches growing boxes around the
/// target and prunes partial coordinates that already exceed the best value.
std::optional<double> grid_min_distance(std::span<const CoordSpace> spaces, const DistanceTarget& target,
                                        const FlatPredicate& predicate, const Grid& grid);

double grid_oscillation(std::span<const CoordSpace> spaces, const FlatFunction& f,
                        std::span<const double> center, std::span<const double> half_widths, double step);

double sphere_distance(const CoordSpace& space, std::span<const double> v, double resolution);

double sampled_sup(std::size_t count, const std::function<double(std::size_t)>& term);

std::vector<double> evaluate_batch(std::size_t count, const std::function<double(std::size_t)>& term);

}  // namespace parallel

}  // namespace ssc::kernels
