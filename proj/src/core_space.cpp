#include "ssc/core_space.hpp"

#include <algorithm>
#include <cmath>

#include "ssc/error.hpp"

namespace ssc {

namespace {

void check_space(const CoordSpace& s) {
    if (s.dim == 0) throw Error(ErrorCode::InvalidArgument, "coordinate space dimension must be >= 1");
}

void check_finite(std::span<const double> v) {
    for (double e : v)
        if (!std::isfinite(e)) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate entry");
}

bool is_zero(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; });
}

}  // namespace

SpaceFamily::SpaceFamily(std::vector<CoordSpace> prefix, CoordSpace tail)
    : prefix_(std::move(prefix)), tail_(tail) {
    for (const auto& s : prefix_) check_space(s);
    check_space(tail_);
}

const CoordSpace& SpaceFamily::at(Index n) const {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "coordinate indices start at 1");
    return n <= prefix_.size() ? prefix_[n - 1] : tail_;
}

double norm(NormKind kind, std::span<const double> v) {
    switch (kind) {
    case NormKind::L1: {
        double s = 0.0;
        for (double e : v) s += std::abs(e);
        return s;
    }
    case NormKind::L2: {
        // hypot-style accumulation keeps (3,4) -> 5 exact
        double s = 0.0;
        for (double e : v) s = std::hypot(s, e);
        return s;
    }
    case NormKind::LInf: {
        double s = 0.0;
        for (double e : v) s = std::max(s, std::abs(e));
        return s;
    }
    }
    return 0.0;
}

double norm(const CoordSpace& space, std::span<const double> v) {
    if (v.size() != space.dim)
        throw Error(ErrorCode::DimensionMismatch,
                    "vector of length " + std::to_string(v.size()) + " in a space of dimension " +
                        std::to_string(space.dim));
    return norm(space.norm, v);
}

double dist_to_unit_sphere(const CoordSpace& space, std::span<const double> v) {
    return std::abs(norm(space, v) - 1.0);
}

CoordVector subtract(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "subtract: length mismatch");
    CoordVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

SigmaSpace::SigmaSpace(SpaceFamily family, std::vector<Anchor> anchors) : family_(std::move(family)) {
    for (auto& a : anchors) {
        for (auto it = a.values.begin(); it != a.values.end();) {
            check_dim(it->first, it->second);
            check_finite(it->second);
            it = is_zero(it->second) ? a.values.erase(it) : std::next(it);
        }
        AnchorId id = a.id;
        if (!anchors_.emplace(id, std::move(a)).second)
            throw Error(ErrorCode::InvalidArgument, "duplicate anchor '" + id.str() + "'");
    }
}

const Anchor& SigmaSpace::anchor(const AnchorId& id) const {
    auto it = anchors_.find(id);
    if (it == anchors_.end()) throw Error(ErrorCode::Lookup, "unknown anchor '" + id.str() + "'");
    return it->second;
}

void SigmaSpace::check_dim(Index n, std::span<const double> v) const {
    const auto& s = family_.at(n);
    if (v.size() != s.dim)
        throw Error(ErrorCode::DimensionMismatch,
                    "coordinate " + std::to_string(n) + " expects dimension " + std::to_string(s.dim) +
                        ", got " + std::to_string(v.size()));
}

double SigmaSpace::norm_at(Index n, std::span<const double> v) const { return norm(family_.at(n), v); }

SparsePoint SigmaSpace::make_point(AnchorId anchor_id, std::map<Index, CoordVector> overrides) const {
    for (const auto& [n, v] : overrides) {
        check_dim(n, v);
        check_finite(v);
    }
    return canonical(SparsePoint{std::move(anchor_id), std::move(overrides)});
}

SparsePoint SigmaSpace::canonical(SparsePoint x) const {
    const Anchor& a = anchor(x.anchor);
    for (auto it = x.overrides.begin(); it != x.overrides.end();) {
        auto av = a.values.find(it->first);
        bool same = av != a.values.end() ? av->second == it->second : is_zero(it->second);
        it = same ? x.overrides.erase(it) : std::next(it);
    }
    return x;
}

SparsePoint SigmaSpace::base_point(const AnchorId& id) const {
    anchor(id);
    return SparsePoint{id, {}};
}

CoordVector SigmaSpace::coordinate(const SparsePoint& x, Index n) const {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "coordinate indices start at 1");
    if (auto it = x.overrides.find(n); it != x.overrides.end()) return it->second;
    const Anchor& a = anchor(x.anchor);
    if (auto it = a.values.find(n); it != a.values.end()) return it->second;
    return CoordVector(family_.at(n).dim, 0.0);
}

double SigmaSpace::coordinate_norm(const SparsePoint& x, Index n) const {
    return norm_at(n, coordinate(x, n));
}

SparsePoint SigmaSpace::splice(const SparsePoint& a, const std::set<Index>& indices,
                               const SparsePoint& x) const {
    SparsePoint out = a;
    for (Index t : indices) out.overrides[t] = coordinate(x, t);
    return canonical(std::move(out));
}

SparsePoint SigmaSpace::splice_one(const SparsePoint& a, Index t, const SparsePoint& x) const {
    return splice(a, {t}, x);
}

SparsePoint SigmaSpace::with_coordinate(const SparsePoint& x, Index t, CoordVector value) const {
    check_dim(t, value);
    check_finite(value);
    SparsePoint out = x;
    out.overrides[t] = std::move(value);
    return canonical(std::move(out));
}

Defect SigmaSpace::defect(const SparsePoint& x, const SparsePoint& y) const {
    if (x.anchor != y.anchor) return std::nullopt;
    std::size_t count = 0;
    auto ix = x.overrides.begin();
    auto iy = y.overrides.begin();
    // both override maps are canonical, so a key present on one side only
    // is a genuine difference
    while (ix != x.overrides.end() || iy != y.overrides.end()) {
        if (iy == y.overrides.end() || (ix != x.overrides.end() && ix->first < iy->first)) {
            ++count;
            ++ix;
        } else if (ix == x.overrides.end() || iy->first < ix->first) {
            ++count;
            ++iy;
        } else {
            if (ix->second != iy->second) ++count;
            ++ix;
            ++iy;
        }
    }
    return count;
}

bool SigmaSpace::same_component(const SparsePoint& x, const SparsePoint& y) const {
    return defect(x, y).has_value();
}

bool SigmaSpace::in_sigma_n(const SparsePoint& x, const SparsePoint& y, std::size_t n) const {
    auto d = defect(x, y);
    return d && *d <= n;
}

Index SigmaSpace::max_relevant_index(const SparsePoint& x) const {
    Index m = 0;
    if (!x.overrides.empty()) m = x.overrides.rbegin()->first;
    const Anchor& a = anchor(x.anchor);
    if (!a.values.empty()) m = std::max(m, a.values.rbegin()->first);
    return m;
}

double SigmaSpace::dist_d_n(const SparsePoint& x, const SparsePoint& y, Index n) const {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "d_n needs n >= 1");
    std::set<Index> relevant;
    auto collect = [&](const std::map<Index, CoordVector>& m) {
        for (const auto& kv : m)
            if (kv.first <= n) relevant.insert(kv.first);
    };
    collect(x.overrides);
    collect(y.overrides);
    collect(anchor(x.anchor).values);
    collect(anchor(y.anchor).values);
    double d = 0.0;
    for (Index i : relevant) d = std::max(d, norm_at(i, subtract(coordinate(x, i), coordinate(y, i))));
    return d;
}

bool SigmaSpace::box_contains(const BoxNeighborhood& box, const SparsePoint& x) const {
    for (const auto& [n, r] : box.radii)
        if (!(norm_at(n, subtract(coordinate(x, n), coordinate(box.center, n))) < r)) return false;
    return true;
}

}  // namespace ssc
