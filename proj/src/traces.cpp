#include "ssc/traces.hpp"

#include <algorithm>
#include <limits>

#include "ssc/error.hpp"

namespace ssc {

std::vector<CoordSpace> layout(const SpaceFamily& family, Index n) {
    std::vector<CoordSpace> out;
    out.reserve(n);
    for (Index i = 1; i <= n; ++i) out.push_back(family.at(i));
    return out;
}

std::vector<double> flatten(const FinitePoint& z) {
    std::vector<double> out;
    for (const auto& v : z) out.insert(out.end(), v.begin(), v.end());
    return out;
}

FinitePoint unflatten(std::span<const CoordSpace> spaces, std::span<const double> flat) {
    FinitePoint z;
    z.reserve(spaces.size());
    std::size_t off = 0;
    for (const auto& s : spaces) {
        if (off + s.dim > flat.size()) throw Error(ErrorCode::DimensionMismatch, "flat vector too short");
        z.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(off),
                       flat.begin() + static_cast<std::ptrdiff_t>(off + s.dim));
        off += s.dim;
    }
    return z;
}

double d_n(std::span<const CoordSpace> spaces, const FinitePoint& x, const FinitePoint& y) {
    if (x.size() != spaces.size() || y.size() != spaces.size())
        throw Error(ErrorCode::DimensionMismatch, "d_n: point length differs from layout");
    double d = 0.0;
    for (std::size_t i = 0; i < spaces.size(); ++i) d = std::max(d, norm(spaces[i], subtract(x[i], y[i])));
    return d;
}

bool TraceComponent::contains(std::span<const CoordSpace> spaces, const FinitePoint& z) const {
    if (z.size() != centers.size()) return false;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double dist = norm(spaces[i], subtract(z[i], centers[i]));
        switch (kind) {
        case ComponentKind::OpenBallProduct:
            if (!(dist < radii[i])) return false;
            break;
        case ComponentKind::ClosedBallProduct:
            if (!(dist <= radii[i])) return false;
            break;
        case ComponentKind::Point:
            if (dist != 0.0) return false;
            break;
        }
    }
    return true;
}

bool TraceSet::contains(std::span<const CoordSpace> spaces, const FinitePoint& z) const {
    if (black_box) return black_box(z);
    return std::any_of(components.begin(), components.end(),
                       [&](const TraceComponent& c) { return c.contains(spaces, z); });
}

double analytic_margin(std::span<const CoordSpace> spaces, const TraceSet& set,
                       const FinitePoint& centers, std::span<const double> inflate) {
    if (!set.analytic()) throw Error(ErrorCode::InvalidArgument, "analytic margin needs an analytic trace");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& c : set.components) {
        if (c.kind == ComponentKind::Point) continue;
        // a closed ball product contributes through its open interior
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < spaces.size(); ++i)
            m = std::min(m, c.radii[i] - norm(spaces[i], subtract(centers[i], c.centers[i])) - inflate[i]);
        best = std::max(best, m);
    }
    return best;
}

}  // namespace ssc
