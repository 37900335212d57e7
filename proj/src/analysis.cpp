#include "ssc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssc/error.hpp"
#include "ssc/s_topology.hpp"

namespace ssc {

namespace {

namespace par = kernels::parallel;

void collect_balls(const ConstructedFunction& f, std::vector<BallProduct>& out) {
    switch (f.kind()) {
    case FunctionKind::BallProduct:
    case FunctionKind::WeightedUnion:
        for (auto& b : ball_products_of(f)) out.push_back(std::move(b));
        break;
    case FunctionKind::Algebra:
        for (const auto& c : f.as<AlgebraParams>().args) collect_balls(c, out);
        break;
    case FunctionKind::Series:
        for (const auto& c : f.as<SeriesParams>().terms) collect_balls(c, out);
        break;
    default:
        break;
    }
}

std::vector<BallProduct> balls_of(const ConstructedFunction& f) {
    std::vector<BallProduct> out;
    collect_balls(f, out);
    return out;
}

CoordVector basis_vector(std::size_t dim) {
    CoordVector e(dim, 0.0);
    e[0] = 1.0;
    return e;
}

Index max_key(const std::map<Index, double>& m) { return m.empty() ? 0 : m.rbegin()->first; }

CoordVector probe_value(const SigmaSpace& space, const std::vector<BallProduct>& balls, const SparsePoint& reference,
                        Index idx, Rng& rng) {
    const auto& cs = space.family().at(idx);
    auto dir = random_unit_vector(cs, rng);
    if (!balls.empty() && uniform(rng, 0.0, 1.0) < 0.75) {
        const auto& b = balls[uniform_index(rng, 0, balls.size() - 1)];
        double rho = 0.5;
        if (reference.anchor == b.anchor && ball_product_contains(space, b, reference))
            rho = sphere_gap(space, b, reference);
        constexpr double d = 1e-3;
        const double mags[] = {0.5, 1.0 - d, 1.0, 1.0 + d, 1.5, 2.0, 1.0 + rho * (1.0 - d), 1.0 + rho,
                               1.0 + rho * (1.0 + d)};
        const double m = mags[uniform_index(rng, 0, std::size(mags) - 1)];
        return scaled_add(space.coordinate(b.center, idx), b.radii.at(idx) * m, dir);
    }
    const double mags[] = {0.5, 1.0, 2.0, 10.0};
    return scaled_add(CoordVector(cs.dim, 0.0), mags[uniform_index(rng, 0, std::size(mags) - 1)], dir);
}

std::vector<AnchorId> other_anchors(const SigmaSpace& space, const AnchorId& own) {
    std::vector<AnchorId> out;
    for (const auto& kv : space.anchors())
        if (kv.first != own) out.push_back(kv.first);
    return out;
}

std::vector<std::set<Index>> subsets_by_size(Index horizon) {
    std::vector<std::set<Index>> out;
    for (Index k = 0; k <= horizon; ++k) {
        std::vector<bool> mask(horizon, false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
            std::set<Index> s;
            for (Index i = 0; i < horizon; ++i)
                if (mask[i]) s.insert(i + 1);
            out.push_back(std::move(s));
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    return out;
}

}  // namespace

BoxNeighborhood net_box(const SigmaSpace& space, const SparsePoint& u, const NetSpec& net, std::size_t level,
                        const std::set<Index>& extra) {
    (void)space;
    if (!(net.shrink > 0.0 && net.shrink < 1.0)) throw Error(ErrorCode::InvalidArgument, "net shrink must be in (0,1)");
    const double radius = net.base_radius * std::pow(net.shrink, static_cast<double>(level));
    BoxNeighborhood box{u, {}};
    for (Index n = 1; n <= level + net.horizon_offset; ++n) box.radii[n] = radius;
    for (Index n : extra) box.radii[n] = radius;
    return box;
}

std::vector<SparsePoint> sample_box(const SigmaSpace& space, const ConstructedFunction& f,
                                    const BoxNeighborhood& box, std::size_t count, Rng& rng, std::size_t far_span) {
    const auto balls = balls_of(f);
    const auto others = f.anchor() ? std::vector<AnchorId>{} : other_anchors(space, box.center.anchor);
    const Index top = std::max(max_key(box.radii), space.max_relevant_index(box.center)) + far_span;
    std::vector<SparsePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SparsePoint x = box.center;
        if (!others.empty() && i % 4 == 3) x = space.base_point(others[(i / 4) % others.size()]);
        const std::size_t probes = uniform_index(rng, 0, 2);
        for (std::size_t p = 0; p < probes; ++p) {
            const Index idx = uniform_index(rng, 1, top);
            if (box.radii.contains(idx)) continue;
            x = space.with_coordinate(x, idx, probe_value(space, balls, box.center, idx, rng));
        }
        for (const auto& [n, r] : box.radii)
            x = space.with_coordinate(x, n, random_in_ball(space.family().at(n), space.coordinate(box.center, n), r, rng));
        out.push_back(std::move(x));
    }
    return out;
}

double sphere_gap(const SigmaSpace& space, const BallProduct& ball, const SparsePoint& u) {
    const auto z = h_transform(space, u, ball);
    const Index n = z.empty() ? 1 : z.rbegin()->first;
    double rho = z.size() < n ? 1.0 : std::numeric_limits<double>::infinity();
    for (const auto& [i, v] : z) rho = std::min(rho, dist_to_unit_sphere(space.family().at(i), v));
    return rho;
}

SparsePoint escape_witness(const SigmaSpace& space, const BallProduct& ball, const SparsePoint& u, Index index) {
    const double rho = sphere_gap(space, ball, u);
    const auto e = basis_vector(space.family().at(index).dim);
    return space.with_coordinate(u, index,
                                 scaled_add(space.coordinate(ball.center, index), ball.radii.at(index) * (1.0 + rho), e));
}

SparsePoint oscillation_witness(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                Index m) {
    if (f.kind() != FunctionKind::BallProduct)
        throw Error(ErrorCode::Precondition, "oscillation witnesses are defined for ball-product functions");
    if (m == 0) throw Error(ErrorCode::InvalidArgument, "witness index m starts at 1");
    const auto& ball = f.as<BallProductParams>().ball;
    const auto z = h_transform(space, u, ball);
    if (!classify_region(space, z).inside) throw Error(ErrorCode::Precondition, "u is not in the ball product W");
    const Index n = z.empty() ? 1 : z.rbegin()->first;
    return escape_witness(space, ball, u, m + n);
}

std::vector<WitnessPair> witness_pairs(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                       const BoxNeighborhood& box, Index min_index) {
    std::vector<WitnessPair> out;
    const double fu = evaluate(space, f, u);
    const auto balls = balls_of(f);
    Index far = std::max({min_index, max_key(box.radii), space.max_relevant_index(u)});
    for (const auto& b : balls) far = std::max(far, space.max_relevant_index(b.center));
    ++far;
    for (const auto& b : balls) {
        if (u.anchor != b.anchor || !ball_product_contains(space, b, u)) continue;
        auto x = escape_witness(space, b, u, far);
        const double v = std::abs(evaluate(space, f, x) - fu);
        out.push_back({u, std::move(x), v});
    }
    if (!f.anchor()) {
        for (const auto& id : other_anchors(space, u.anchor)) {
            auto y = density_witness(space, space.base_point(id), box);
            const double v = std::abs(evaluate(space, f, y) - fu);
            out.push_back({u, std::move(y), v});
        }
    }
    return out;
}

LevelReport ssc_check(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u, Index t,
                      const NetSpec& net, double tol) {
    LevelReport report;
    for (std::size_t j = 0; j < net.levels; ++j) {
        const auto box = net_box(space, u, net, j, {t});
        Rng rng(derive_seed(net.seed, j));
        auto xs = sample_box(space, f, box, net.samples, rng, net.far_span);
        for (auto& w : witness_pairs(space, f, u, box)) xs.push_back(std::move(w.second));
        report.per_level.push_back(par::sampled_sup(xs.size(), [&](std::size_t i) {
            return std::abs(evaluate(space, f, xs[i]) - evaluate(space, f, space.splice_one(xs[i], t, u)));
        }));
    }
    report.passed = report.last() < tol;
    return report;
}

LevelReport separate_continuity_check(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                      Index t, const std::vector<double>& offsets, double tol, std::uint64_t seed,
                                      std::size_t directions) {
    const double fu = evaluate(space, f, u);
    const auto& cs = space.family().at(t);
    const auto ut = space.coordinate(u, t);
    Rng rng(seed);
    LevelReport report;
    for (double delta : offsets) {
        std::vector<SparsePoint> xs;
        for (std::size_t k = 0; k < directions; ++k)
            xs.push_back(space.with_coordinate(u, t, scaled_add(ut, delta, random_unit_vector(cs, rng))));
        report.per_level.push_back(
            par::sampled_sup(xs.size(), [&](std::size_t i) { return std::abs(evaluate(space, f, xs[i]) - fu); }));
    }
    report.passed = report.last() < tol;
    return report;
}

std::string_view to_string(ContinuityVerdict v) noexcept {
    switch (v) {
    case ContinuityVerdict::Discontinuous: return "DISCONTINUOUS";
    case ContinuityVerdict::LikelyContinuous: return "LIKELY_CONTINUOUS";
    case ContinuityVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

OscillationEstimate oscillation_estimate(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                         const NetSpec& net, double continuity_tol) {
    OscillationEstimate est;
    est.point = u;
    const double fu = evaluate(space, f, u);
    std::vector<double> lo(net.levels, fu), hi(net.levels, fu);
    bool witnessed_everywhere = net.levels > 0;
    double lower = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < net.levels; ++j) {
        const auto box = net_box(space, u, net, j);
        Rng rng(derive_seed(net.seed, j));
        const auto xs = sample_box(space, f, box, net.samples, rng, net.far_span);
        const auto values = par::evaluate_batch(xs.size(), [&](std::size_t i) { return evaluate(space, f, xs[i]); });
        for (double v : values) {
            lo[j] = std::min(lo[j], v);
            hi[j] = std::max(hi[j], v);
        }
        auto pairs = witness_pairs(space, f, u, box);
        auto best = std::max_element(pairs.begin(), pairs.end(),
                                     [](const auto& a, const auto& b) { return a.value < b.value; });
        if (best == pairs.end()) {
            witnessed_everywhere = false;
            continue;
        }
        lower = std::min(lower, best->value);
        est.witnesses.push_back(*best);
    }
    est.certified_lower = witnessed_everywhere ? lower : 0.0;
    // U_{j+1} ⊆ U_j, so deeper samples also count for shallower levels
    est.sampled_upper.resize(net.levels);
    double run_lo = fu, run_hi = fu;
    for (std::size_t j = net.levels; j-- > 0;) {
        run_lo = std::min(run_lo, lo[j]);
        run_hi = std::max(run_hi, hi[j]);
        est.sampled_upper[j] = run_hi - run_lo;
    }
    if (est.certified_lower > kWitnessSlack)
        est.verdict = ContinuityVerdict::Discontinuous;
    else if (!est.sampled_upper.empty() && est.sampled_upper.back() < continuity_tol)
        est.verdict = ContinuityVerdict::LikelyContinuous;
    else
        est.verdict = ContinuityVerdict::Inconclusive;
    return est;
}

BoxNeighborhood continuity_neighborhood(const SigmaSpace& space, const ConstructedFunction& f,
                                        const SparsePoint& u, double eps) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    if (f.kind() != FunctionKind::BallProduct)
        throw Error(ErrorCode::Precondition, "continuity neighborhoods are defined for ball-product functions");
    const auto& ball = f.as<BallProductParams>().ball;
    const auto z = h_transform(space, u, ball);
    const RegionTag region = classify_region(space, z);
    if (region.inside) throw Error(ErrorCode::Precondition, "u lies in W, where f is discontinuous");
    BoxNeighborhood box{u, {}};
    // f takes values in [0,1]
    if (eps > 1.0) return box;

    const Index n = region.escape;
    const double zn = space.norm_at(n, z.at(n));
    for (Index i = 1; i < n; ++i) {
        const auto it = z.find(i);
        const double qi = it == z.end() ? 0.0 : space.norm_at(i, it->second);
        const double room = 1.0 - qi;  // stay inside the open unit ball B'_i
        box.radii[i] = ball.radii.at(i) * (zn == 1.0 ? room : std::min(eps, room));
    }
    // on the sphere: B(u_n, ε); outside it: keep clear of the closed unit ball
    box.radii[n] = ball.radii.at(n) * (zn == 1.0 ? eps : std::min(eps, zn - 1.0));
    return box;
}

NeighborhoodCheck neighborhood_check(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& u,
                                     const BoxNeighborhood& box, double eps, std::size_t samples, std::uint64_t seed) {
    Rng rng(seed);
    auto xs = sample_box(space, f, box, samples, rng);
    for (auto& w : witness_pairs(space, f, u, box)) xs.push_back(std::move(w.second));
    const double fu = evaluate(space, f, u);
    NeighborhoodCheck out;
    out.samples = xs.size();
    out.max_difference =
        par::sampled_sup(xs.size(), [&](std::size_t i) { return std::abs(evaluate(space, f, xs[i]) - fu); });
    out.passed = out.max_difference < eps;
    return out;
}

std::vector<BoxNeighborhood> default_criterion_boxes(const SparsePoint& a, Index horizon) {
    std::vector<BoxNeighborhood> out{{a, {}}};
    for (double r : {1.0, 1e-1, 1e-3}) {
        BoxNeighborhood b{a, {}};
        for (Index n = 1; n <= horizon; ++n) b.radii[n] = r;
        out.push_back(std::move(b));
    }
    return out;
}

CriterionResult splice_criterion_check(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& a,
                                       double eps, Index horizon, const std::vector<BoxNeighborhood>& boxes,
                                       std::size_t samples, std::uint64_t seed) {
    CriterionResult result;
    result.horizon = horizon;
    result.boxes_searched = boxes.size();
    const double fa = evaluate(space, f, a);

    std::vector<std::vector<SparsePoint>> box_samples;
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        Rng rng(derive_seed(seed, b));
        auto xs = sample_box(space, f, boxes[b], samples, rng);
        for (auto& w : witness_pairs(space, f, boxes[b].center, boxes[b], horizon)) xs.push_back(std::move(w.second));
        box_samples.push_back(std::move(xs));
    }

    const auto subsets = subsets_by_size(horizon);
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        for (const auto& subset : subsets) {
            const auto& xs = box_samples[b];
            const double sup = par::sampled_sup(xs.size(), [&](std::size_t i) {
                return std::abs(fa - evaluate(space, f, space.splice(xs[i], subset, a)));
            });
            if (sup < eps) {
                result.found = true;
                result.subset = subset;
                result.box_index = b;
                result.sup = sup;
                return result;
            }
        }
    }
    return result;
}

SContinuityReport s_continuity_check(const SigmaSpace& space, const ConstructedFunction& f,
                                     const std::vector<std::pair<SparsePoint, SparsePoint>>& pairs) {
    SContinuityReport r;
    for (const auto& [x, y] : pairs) {
        if (!space.same_component(x, y)) continue;
        ++r.compared;
        if (evaluate(space, f, x) != evaluate(space, f, y)) {
            r.passed = false;
            r.failure = std::make_pair(x, y);
            return r;
        }
    }
    return r;
}

std::string_view to_string(TraceStatus s) noexcept {
    switch (s) {
    case TraceStatus::Open: return "OPEN";
    case TraceStatus::NotOpenAt: return "NOT_OPEN_AT";
    case TraceStatus::Inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

namespace {

/// Points z ± δ·e along every scalar axis.
std::vector<FinitePoint> axis_probes(const FinitePoint& z, double delta) {
    std::vector<FinitePoint> out;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = 0; j < z[i].size(); ++j)
            for (double s : {delta, -delta}) {
                FinitePoint p = z;
                p[i][j] += s;
                out.push_back(std::move(p));
            }
    return out;
}

/// Points of a closed component where it meets its own boundary: one
/// coordinate pushed to the radius along ±e_j.
std::vector<std::pair<FinitePoint, FinitePoint>> boundary_candidates(std::span<const CoordSpace> spaces,
                                                                     const TraceComponent& c) {
    constexpr double kOutward = 1e-6;
    std::vector<std::pair<FinitePoint, FinitePoint>> out;
    if (c.kind == ComponentKind::Point) {
        for (auto& p : axis_probes(c.centers, kOutward)) out.emplace_back(c.centers, std::move(p));
        return out;
    }
    for (std::size_t i = 0; i < c.centers.size(); ++i)
        for (std::size_t j = 0; j < spaces[i].dim; ++j)
            for (double s : {1.0, -1.0}) {
                FinitePoint b = c.centers, beyond = c.centers;
                b[i][j] += s * c.radii[i];
                beyond[i][j] += s * (c.radii[i] + kOutward * std::max(1.0, c.radii[i]));
                out.emplace_back(std::move(b), std::move(beyond));
            }
    return out;
}

TraceVerdict analytic_verdict(std::span<const CoordSpace> spaces, const TraceSet& set, Index n) {
    TraceVerdict v{n, TraceStatus::Open, std::nullopt};
    if (!set.analytic()) {
        v.status = TraceStatus::Inconclusive;
        return v;
    }
    TraceSet open_part;
    for (const auto& c : set.components)
        if (c.kind == ComponentKind::OpenBallProduct) open_part.components.push_back(c);
    for (const auto& c : set.components) {
        if (c.kind == ComponentKind::OpenBallProduct) continue;
        const std::vector<double> inflate =
            c.kind == ComponentKind::Point ? std::vector<double>(c.centers.size(), 0.0) : c.radii;
        if (!open_part.components.empty() && analytic_margin(spaces, open_part, c.centers, inflate) > 0.0) continue;
        bool refuted = false;
        for (const auto& [b, beyond] : boundary_candidates(spaces, c)) {
            if (set.contains(spaces, b) && !set.contains(spaces, beyond) &&
                !open_part.contains(spaces, b)) {
                v.status = TraceStatus::NotOpenAt;
                v.witness = b;
                refuted = true;
                break;
            }
        }
        if (refuted) return v;
        v.status = TraceStatus::Inconclusive;
    }
    return v;
}

TraceVerdict grid_verdict(std::span<const CoordSpace> spaces, const TraceSet& set, Index n, const TraceCheckMode& mode) {
    std::vector<FinitePoint> suspects;
    for (const auto& z : mode.candidates)
        if (z.size() == n) suspects.push_back(z);
    Rng rng(derive_seed(mode.seed, n));
    for (const auto& c : set.components) {
        suspects.push_back(c.centers);
        if (c.kind != ComponentKind::OpenBallProduct)
            for (auto& [b, beyond] : boundary_candidates(spaces, c)) suspects.push_back(std::move(b));
        if (c.kind == ComponentKind::Point) continue;
        for (std::size_t k = 0; k < mode.random_points; ++k) {
            FinitePoint z;
            for (std::size_t i = 0; i < n; ++i) z.push_back(random_in_ball(spaces[i], c.centers[i], c.radii[i], rng));
            suspects.push_back(std::move(z));
        }
    }
    TraceVerdict v{n, TraceStatus::Open, std::nullopt};
    for (const auto& z : suspects) {
        if (!set.contains(spaces, z)) continue;
        bool open_here = false;
        double delta = mode.step;
        for (std::size_t k = 0; k < mode.refinements && !open_here; ++k, delta /= 2.0) {
            const auto probes = axis_probes(z, delta);
            open_here = std::all_of(probes.begin(), probes.end(),
                                    [&](const FinitePoint& p) { return set.contains(spaces, p); });
        }
        if (!open_here) {
            v.status = TraceStatus::NotOpenAt;
            v.witness = z;
            return v;
        }
    }
    return v;
}

}  // namespace

std::vector<TraceVerdict> nearly_open_trace_check(const SigmaSpace& space, const TraceFamily& traces, Index horizon,
                                                  const TraceCheckMode& mode) {
    std::vector<TraceVerdict> out;
    for (Index n = 1; n <= horizon; ++n) {
        const auto spaces = layout(space.family(), n);
        const auto set = traces.at(n);
        out.push_back(mode.kind == TraceCheckMode::Kind::Analytic ? analytic_verdict(spaces, set, n)
                                                                  : grid_verdict(spaces, set, n, mode));
    }
    return out;
}

bool all_open(const std::vector<TraceVerdict>& verdicts) {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](const TraceVerdict& v) { return v.status == TraceStatus::Open; });
}

double brute_force_set_distance(std::span<const CoordSpace> spaces, const FinitePoint& u,
                                const kernels::FlatPredicate& predicate, const kernels::Grid& grid) {
    return brute_force_set_distance(spaces, kernels::DistanceTarget::point(u), predicate, grid);
}

double brute_force_set_distance(std::span<const CoordSpace> spaces, const kernels::DistanceTarget& target,
                                const kernels::FlatPredicate& predicate, const kernels::Grid& grid) {
    auto d = par::grid_min_distance(spaces, target, predicate, grid);
    if (!d) throw Error(ErrorCode::Infeasible, "no grid point satisfies the predicate");
    return *d;
}

double brute_force_oscillation(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& base,
                               const std::vector<Index>& indices, const std::vector<double>& half_widths,
                               double step) {
    if (indices.size() != half_widths.size())
        throw Error(ErrorCode::InvalidArgument, "one half width per slice index");
    std::vector<CoordSpace> spaces;
    std::vector<double> center, widths;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        spaces.push_back(space.family().at(indices[k]));
        for (double c : space.coordinate(base, indices[k])) {
            center.push_back(c);
            widths.push_back(half_widths[k]);
        }
    }
    return par::grid_oscillation(
        spaces,
        [&](std::span<const double> flat) {
            const auto z = unflatten(spaces, flat);
            SparsePoint x = base;
            for (std::size_t k = 0; k < indices.size(); ++k) x.overrides[indices[k]] = z[k];
            return evaluate(space, f, space.canonical(std::move(x)));
        },
        center, widths, step);
}

}  // namespace ssc
