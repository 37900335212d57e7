#pragma once

// Finite-coordinate traces W_{1..n} = {z ∈ Y_n : a_{1..n}^z ∈ W} of a subset
// W of σ(a), where Y_n = X_1 × ... × X_n.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ssc/core_space.hpp"

namespace ssc {

/// A point of Y_n, one vector per coordinate.
using FinitePoint = std::vector<CoordVector>;

/// Coordinate layout of Y_n: the first n spaces of the family.
std::vector<CoordSpace> layout(const SpaceFamily& family, Index n);
std::vector<double> flatten(const FinitePoint& z);
FinitePoint unflatten(std::span<const CoordSpace> spaces, std::span<const double> flat);

/// max_i ‖x_i − y_i‖_i on Y_n.
double d_n(std::span<const CoordSpace> spaces, const FinitePoint& x, const FinitePoint& y);

enum class ComponentKind { OpenBallProduct, ClosedBallProduct, Point };

/// Product over i <= n of balls of radius radii[i] around centers[i] in the
/// i-th coordinate norm (radii ignored for Point).
struct TraceComponent {
    ComponentKind kind = ComponentKind::OpenBallProduct;
    FinitePoint centers;
    std::vector<double> radii;

    bool contains(std::span<const CoordSpace> spaces, const FinitePoint& z) const;
};

/// A subset of Y_n: either an analytic union of components or a black box.
struct TraceSet {
    std::vector<TraceComponent> components;
    std::function<bool(const FinitePoint&)> black_box;

    bool analytic() const noexcept { return !black_box; }
    bool contains(std::span<const CoordSpace> spaces, const FinitePoint& z) const;
};

struct TraceFamily {
    std::function<TraceSet(Index n)> trace;

    TraceSet at(Index n) const { return trace(n); }
};

/// Lower bound on the d_n-distance from the closed product ∏ B[centers_i, inflate_i]
/// to Y_n \ G, using only the open parts of G's components taken one at a time.
/// Nonpositive when that product is not inside a single open component.
double analytic_margin(std::span<const CoordSpace> spaces, const TraceSet& set,
                       const FinitePoint& centers, std::span<const double> inflate);

}  // namespace ssc
