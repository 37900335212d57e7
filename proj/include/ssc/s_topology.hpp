#pragma once

// Probing predicates for the S-topology: sets closed under changing a single
// coordinate of their members. Openness of a black-box set can only be
// refuted by sampling, so verdicts carry a certainty label.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ssc/core_space.hpp"

namespace ssc {

enum class SetTag { BallProductUnion, ComponentUnion, BlackBox };

struct SetPredicate {
    std::function<bool(const SparsePoint&)> contains;
    SetTag tag = SetTag::BlackBox;
    std::string description;

    bool operator()(const SparsePoint& x) const { return contains(x); }
    SetPredicate negated() const;
};

SetPredicate whole_space();
SetPredicate empty_set();
/// Union of the sigma-components named by `anchors`.
SetPredicate component_union(std::set<AnchorId> anchors);

struct MutationProbe {
    std::uint64_t seed = 0;
    std::size_t per_point_mutations = 8;
    std::vector<double> magnitudes{1e-3, 1e-1, 1.0, 10.0, 1e3};
};

enum class Status { Pass, Counterexample };
enum class Certainty { Evidence, Certified };

struct Verdict {
    Status status = Status::Pass;
    Certainty certainty = Certainty::Evidence;
    std::optional<SparsePoint> x;  // member of the set
    std::optional<SparsePoint> y;  // offending mutation
    std::size_t checks = 0;

    bool passed() const noexcept { return status == Status::Pass; }
};

/// Looks for x ∈ A and y ∈ σ_1(x) with y ∉ A.
Verdict s_open_probe(const SigmaSpace& space, const SetPredicate& set,
                     const std::vector<SparsePoint>& sample, const MutationProbe& probe);

struct ComplementReport {
    Verdict direct;
    Verdict complement;
    bool consistent = false;  // both probes agree
};

ComplementReport complement_closure_check(const SigmaSpace& space, const SetPredicate& set,
                                          const std::vector<SparsePoint>& sample,
                                          const MutationProbe& probe);

std::vector<std::vector<SparsePoint>> component_partition(const SigmaSpace& space,
                                                          const std::vector<SparsePoint>& points);

/// Checks splice(x, {t}, a) ∈ A for sampled members x and indices t.
Verdict projective_symmetry_check(const SigmaSpace& space, const SetPredicate& set,
                                  const SparsePoint& a, const std::vector<SparsePoint>& sample,
                                  const MutationProbe& probe);

struct LimitReport {
    bool passed = false;
    bool vacuous = false;  // t unconstrained by the box
    double delta = 0.0;
};

/// Largest δ on `radius_grid` such that every probed v with ‖v − a_t‖ < δ
/// gives splice(a, {t}, v) inside the box.
LimitReport coordinated_limit_check(const SigmaSpace& space, const SparsePoint& a, Index t,
                                    const BoxNeighborhood& target, std::vector<double> radius_grid,
                                    const MutationProbe& probe);

/// A point of representative's component that lies inside the box.
SparsePoint density_witness(const SigmaSpace& space, const SparsePoint& representative,
                            const BoxNeighborhood& box);

/// Indices worth mutating around x: its support plus random indices past it.
std::vector<Index> probe_indices(const SigmaSpace& space, const SparsePoint& x, std::size_t count,
                                 std::mt19937_64& rng);

}  // namespace ssc
