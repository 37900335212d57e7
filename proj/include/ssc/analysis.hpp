#pragma once

// Sampled verifiers for continuity-type properties of constructed functions
// on σ(a) with the Tychonoff topology, plus brute-force grid oracles.
//
// Sampling can certify discontinuity (explicit witness pairs inside every
// probed neighborhood) but only gives evidence of continuity, so verdicts
// are three-valued.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ssc/constructions.hpp"
#include "ssc/core_space.hpp"
#include "ssc/kernels.hpp"
#include "ssc/random.hpp"
#include "ssc/traces.hpp"

namespace ssc {

/// Finite stand-in for a net converging to a point: level j is a box of
/// radius base_radius·shrink^j constraining indices 1..j+horizon_offset.
struct NetSpec {
    std::size_t levels = 6;
    double shrink = 0.25;
    double base_radius = 1.0;
    std::size_t horizon_offset = 2;
    std::size_t samples = 64;
    std::size_t far_span = 8;  // unconstrained probes reach this far past the box
    std::uint64_t seed = 0;
};

inline constexpr double kWitnessSlack = 1e-9;
inline constexpr double kContinuityTol = 1e-2;

BoxNeighborhood net_box(const SigmaSpace& space, const SparsePoint& u, const NetSpec& net, std::size_t level,
                        const std::set<Index>& extra = {});

/// Random points of the box. Constrained coordinates are drawn inside their
/// balls; a few unconstrained coordinates get probe values chosen from the
/// function's structure (unit-sphere crossings after h for ball products).
/// Functions accepting any anchor also get points from other components.
std::vector<SparsePoint> sample_box(const SigmaSpace& space, const ConstructedFunction& f,
                                    const BoxNeighborhood& box, std::size_t count, Rng& rng,
                                    std::size_t far_span = 8);

struct WitnessPair {
    SparsePoint first;
    SparsePoint second;
    double value = 0.0;  // |f(first) − f(second)|
};

/// Constructed pairs inside the box whose values differ: escape witnesses at
/// an index past `min_index` and past everything the box constrains for
/// ball-product functions, other-component points for functions that
/// accept every anchor.
std::vector<WitnessPair> witness_pairs(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                       const BoxNeighborhood& box, Index min_index = 0);

/// Point equal to u except coordinate `index`, set to w + r(1+ρ)e_1 where ρ
/// is min_i dist(h(u)_i, S_i) over the support of h(u).
SparsePoint escape_witness(const SigmaSpace& space, const BallProduct& ball, const SparsePoint& u, Index index);

/// Witness x^m for a ball-product function at u ∈ W: u with
/// coordinate m+n pushed to h-norm 1+ρ, n the last support index of h(u).
SparsePoint oscillation_witness(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                Index m);

/// ρ = min_{1<=i<=n} dist(h(u)_i, S_i) for the witness above.
double sphere_gap(const SigmaSpace& space, const BallProduct& ball, const SparsePoint& u);

struct LevelReport {
    std::vector<double> per_level;
    bool passed = false;

    double last() const { return per_level.empty() ? 0.0 : per_level.back(); }
};

/// s_j = max over sampled x ∈ U_j of |f(x) − f(splice(x, {t}, u))|.
LevelReport ssc_check(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u, Index t,
                      const NetSpec& net, double tol);

/// Values of s ↦ f(u with coordinate t = s) along shrinking offsets.
LevelReport separate_continuity_check(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                      Index t, const std::vector<double>& offsets, double tol,
                                      std::uint64_t seed = 0, std::size_t directions = 8);

enum class ContinuityVerdict { Discontinuous, LikelyContinuous, Inconclusive };
std::string_view to_string(ContinuityVerdict v) noexcept;

struct OscillationEstimate {
    SparsePoint point;
    double certified_lower = 0.0;
    std::vector<WitnessPair> witnesses;  // best constructed pair per level
    std::vector<double> sampled_upper;   // nonincreasing
    ContinuityVerdict verdict = ContinuityVerdict::Inconclusive;
};

OscillationEstimate oscillation_estimate(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                         const NetSpec& net, double continuity_tol = kContinuityTol);

/// Box around u ∈ C (escape at n) on which f stays within ε of f(u).
BoxNeighborhood continuity_neighborhood(const SigmaSpace& space, const ConstructedFunction& f,
                                        const SparsePoint& u, double eps);

struct NeighborhoodCheck {
    double max_difference = 0.0;
    std::size_t samples = 0;
    bool passed = false;
};

/// Samples the box (with far probes) and checks |f(x) − f(u)| < ε.
NeighborhoodCheck neighborhood_check(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                     const BoxNeighborhood& box, double eps, std::size_t samples, std::uint64_t seed);

struct CriterionResult {
    bool found = false;
    std::set<Index> subset;       // T_0 when found
    std::size_t box_index = 0;    // into the searched box list
    double sup = 0.0;             // sampled sup for the reported (T_0, U)
    Index horizon = 0;            // budget: subsets of {1..horizon}
    std::size_t boxes_searched = 0;
};

/// Boxes tried by default: the whole space, then boxes constraining 1..N
/// with radii 1, 1e-1, 1e-3.
std::vector<BoxNeighborhood> default_criterion_boxes(const SparsePoint& a, Index horizon);

/// For each box U in order, searches T_0 ⊆ {1..N} by increasing size with
/// sup_{x∈U} |f(a) − f(splice(x, T_0, a))| < ε. NOT_FOUND is relative to
/// the budget, not a proof.
CriterionResult splice_criterion_check(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& a,
                                       double eps, Index horizon, const std::vector<BoxNeighborhood>& boxes,
                                       std::size_t samples, std::uint64_t seed);

struct SContinuityReport {
    bool passed = true;
    std::size_t compared = 0;
    std::optional<std::pair<SparsePoint, SparsePoint>> failure;
};

/// f must be constant on each sampled sigma-component.
SContinuityReport s_continuity_check(const SigmaSpace& space, const ConstructedFunction& f,
                                     const std::vector<std::pair<SparsePoint, SparsePoint>>& pairs);

enum class TraceStatus { Open, NotOpenAt, Inconclusive };
std::string_view to_string(TraceStatus s) noexcept;

struct TraceVerdict {
    Index n = 0;
    TraceStatus status = TraceStatus::Inconclusive;
    std::optional<FinitePoint> witness;
};

struct TraceCheckMode {
    enum class Kind { Analytic, Grid } kind = Kind::Analytic;
    double step = 0.01;
    std::size_t refinements = 10;   // δ = step / 2^k, k < refinements
    std::size_t random_points = 32;  // sampled members per analytic component
    std::uint64_t seed = 0;
    std::vector<FinitePoint> candidates;  // extra suspects per n (matched by size)
};

std::vector<TraceVerdict> nearly_open_trace_check(const SigmaSpace& space, const TraceFamily& traces, Index horizon,
                                                  const TraceCheckMode& mode);

bool all_open(const std::vector<TraceVerdict>& verdicts);

/// Grid oracle: min over grid points y with predicate(y) of d_n(u, y).
double brute_force_set_distance(std::span<const CoordSpace> spaces, const FinitePoint& u,
                                const kernels::FlatPredicate& predicate, const kernels::Grid& grid);
double brute_force_set_distance(std::span<const CoordSpace> spaces, const kernels::DistanceTarget& target,
                                const kernels::FlatPredicate& predicate, const kernels::Grid& grid);

/// Grid oracle for ω_f on a finite slice: coordinates `indices` of `base`
/// range over the lattice box around their values in base, everything else
/// stays fixed. half_widths[i] applies to every scalar axis of indices[i].
/// Returns max − min of f over the lattice.
double brute_force_oscillation(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& base,
                               const std::vector<Index>& indices, const std::vector<double>& half_widths,
                               double step);

}  // namespace ssc
