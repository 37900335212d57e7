#pragma once

// Sparse points of sigma-products of countably many finite-dimensional
// normed spaces X_1, X_2, ... Every point lives over an anchor and differs
// from it in finitely many coordinates.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace ssc {

/// Coordinate index, 1-based.
using Index = std::size_t;

enum class NormKind { L1, L2, LInf };

struct CoordSpace {
    std::size_t dim = 1;
    NormKind norm = NormKind::L2;

    bool operator==(const CoordSpace&) const = default;
};

using CoordVector = std::vector<double>;

/// X_n for every n >= 1: an explicit prefix followed by a tail descriptor
/// that repeats forever.
class SpaceFamily {
public:
    SpaceFamily() = default;
    SpaceFamily(std::vector<CoordSpace> prefix, CoordSpace tail);

    const CoordSpace& at(Index n) const;
    const std::vector<CoordSpace>& prefix() const noexcept { return prefix_; }
    const CoordSpace& tail() const noexcept { return tail_; }

    bool operator==(const SpaceFamily&) const = default;

private:
    std::vector<CoordSpace> prefix_;
    CoordSpace tail_;
};

/// Opaque label of a sigma-component. Distinct anchors are distinct
/// components by declaration.
class AnchorId {
public:
    AnchorId() = default;
    explicit AnchorId(std::string name) : name_(std::move(name)) {}

    const std::string& str() const noexcept { return name_; }
    auto operator<=>(const AnchorId&) const = default;

private:
    std::string name_;
};

struct Anchor {
    AnchorId id;
    std::map<Index, CoordVector> values;  // unlisted coordinates are zero

    bool operator==(const Anchor&) const = default;
};

struct SparsePoint {
    AnchorId anchor;
    std::map<Index, CoordVector> overrides;

    bool operator==(const SparsePoint&) const = default;
};

/// Number of differing coordinates; nullopt means infinitely many
/// (different anchors).
using Defect = std::optional<std::size_t>;

/// Basic Tychonoff neighborhood: open balls around the center's coordinates
/// at finitely many indices, everything else free.
struct BoxNeighborhood {
    SparsePoint center;
    std::map<Index, double> radii;
};

double norm(const CoordSpace& space, std::span<const double> v);
double norm(NormKind kind, std::span<const double> v);

/// Distance from v to the unit sphere of the coordinate norm. Equals
/// |‖v‖ − 1| in every norm.
double dist_to_unit_sphere(const CoordSpace& space, std::span<const double> v);

CoordVector subtract(std::span<const double> x, std::span<const double> y);

/// The ambient space: coordinate family plus the table of anchors.
class SigmaSpace {
public:
    SigmaSpace() = default;
    SigmaSpace(SpaceFamily family, std::vector<Anchor> anchors);

    const SpaceFamily& family() const noexcept { return family_; }
    const std::map<AnchorId, Anchor>& anchors() const noexcept { return anchors_; }
    const Anchor& anchor(const AnchorId& id) const;
    bool has_anchor(const AnchorId& id) const { return anchors_.contains(id); }

    /// Validates dimensions and drops overrides equal to the anchor value.
    SparsePoint make_point(AnchorId anchor, std::map<Index, CoordVector> overrides) const;
    SparsePoint canonical(SparsePoint x) const;
    SparsePoint base_point(const AnchorId& anchor) const;

    CoordVector coordinate(const SparsePoint& x, Index n) const;
    double coordinate_norm(const SparsePoint& x, Index n) const;
    double norm_at(Index n, std::span<const double> v) const;
    void check_dim(Index n, std::span<const double> v) const;

    /// Point with x's coordinates on `indices` and a's elsewhere; anchor of a.
    SparsePoint splice(const SparsePoint& a, const std::set<Index>& indices,
                       const SparsePoint& x) const;
    SparsePoint splice_one(const SparsePoint& a, Index t, const SparsePoint& x) const;
    SparsePoint with_coordinate(const SparsePoint& x, Index t, CoordVector value) const;

    Defect defect(const SparsePoint& x, const SparsePoint& y) const;
    bool same_component(const SparsePoint& x, const SparsePoint& y) const;
    bool in_sigma_n(const SparsePoint& x, const SparsePoint& y, std::size_t n) const;

    /// max_{1<=i<=n} ‖x_i − y_i‖_i
    double dist_d_n(const SparsePoint& x, const SparsePoint& y, Index n) const;

    bool box_contains(const BoxNeighborhood& box, const SparsePoint& x) const;

    /// Largest index at which x may be nonzero (overrides or anchor values).
    Index max_relevant_index(const SparsePoint& x) const;

private:
    SpaceFamily family_;
    std::map<AnchorId, Anchor> anchors_;
};

}  // namespace ssc
