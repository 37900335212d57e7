#include "ssc/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "ssc/analysis.hpp"
#include "ssc/constructions.hpp"
#include "ssc/error.hpp"
#include "ssc/random.hpp"
#include "ssc/s_topology.hpp"

namespace ssc {

namespace {

constexpr double kSlack = 1e-9;
constexpr double kEps = 1e-2;

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

class Scaled {
public:
    explicit Scaled(double scale) : scale_(scale) {}
    std::size_t operator()(std::size_t n) const {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale_)));
    }

private:
    double scale_;
};

/// Mixed dimensions and norms; anchor "a" is zero, "b" and "c" are not.
SigmaSpace mixed_space() {
    SpaceFamily family({{1, NormKind::L2}, {2, NormKind::L1}, {3, NormKind::LInf}, {2, NormKind::L2}},
                       {2, NormKind::L2});
    return SigmaSpace(family, {Anchor{AnchorId("a"), {}},
                               Anchor{AnchorId("b"), {{1, {1.0}}, {2, {0.5, -0.5}}}},
                               Anchor{AnchorId("c"), {{5, {2.0, 0.0}}}}});
}

CoordVector random_box_vector(std::size_t dim, double half, Rng& rng) {
    CoordVector v(dim);
    for (auto& c : v) c = uniform(rng, -half, half);
    return v;
}

AnchorId random_anchor(const SigmaSpace& space, Rng& rng) {
    auto it = space.anchors().begin();
    std::advance(it, static_cast<std::ptrdiff_t>(uniform_index(rng, 0, space.anchors().size() - 1)));
    return it->first;
}

SparsePoint random_point(const SigmaSpace& space, const AnchorId& anchor, Index max_index, double half, Rng& rng) {
    std::map<Index, CoordVector> ov;
    const std::size_t k = uniform_index(rng, 0, max_index);
    for (std::size_t j = 0; j < k; ++j) {
        const Index n = uniform_index(rng, 1, max_index);
        ov[n] = random_box_vector(space.family().at(n).dim, half, rng);
    }
    return space.make_point(anchor, std::move(ov));
}

BallProduct random_ball(const SigmaSpace& space, const AnchorId& anchor, Rng& rng) {
    BallProduct b;
    b.anchor = anchor;
    b.center = random_point(space, anchor, 5, 2.0, rng);
    for (int i = 0; i < 5; ++i) b.radii.prefix.push_back(uniform(rng, 0.5, 2.0));
    b.radii.tail = uniform(rng, 0.5, 1.5);
    return b;
}

/// z with support in 1..max_index and every coordinate norm below `reach`.
ZeroSequence random_inside(const SigmaSpace& space, Index max_index, double reach, Rng& rng) {
    ZeroSequence z;
    const std::size_t k = uniform_index(rng, 0, max_index);
    for (std::size_t j = 0; j < k; ++j) {
        const Index n = uniform_index(rng, 1, max_index);
        const auto& cs = space.family().at(n);
        z[n] = random_in_ball(cs, CoordVector(cs.dim, 0.0), reach, rng);
    }
    return z;
}

/// z escaping at `n`; with probability 1/4 exactly on the unit sphere.
ZeroSequence random_escape(const SigmaSpace& space, Index n, double min_norm, Rng& rng) {
    ZeroSequence z;
    for (Index i = 1; i < n; ++i) {
        if (uniform(rng, 0.0, 1.0) < 0.3) continue;
        const auto& cs = space.family().at(i);
        z[i] = random_in_ball(cs, CoordVector(cs.dim, 0.0), 1.0, rng);
    }
    const auto& cs = space.family().at(n);
    const double m = (min_norm <= 1.0 && uniform(rng, 0.0, 1.0) < 0.25) ? 1.0 : uniform(rng, min_norm, 3.0);
    z[n] = scaled_add(CoordVector(cs.dim, 0.0), m, random_unit_vector(cs, rng));
    for (Index i = n + 1; i <= n + 2; ++i) {
        if (uniform(rng, 0.0, 1.0) < 0.5) continue;
        z[i] = random_box_vector(space.family().at(i).dim, 3.0, rng);
    }
    return z;
}

std::vector<BallProduct> suite_balls(const SigmaSpace& space, std::uint64_t seed, std::size_t count) {
    Rng rng(derive_seed(seed, 0xba11));
    std::vector<BallProduct> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_ball(space, random_anchor(space, rng), rng));
    return out;
}

std::vector<NearlyOpenUnion> suite_unions(const SigmaSpace& space, std::uint64_t seed, std::size_t count) {
    Rng rng(derive_seed(seed, 0x0419));
    std::vector<NearlyOpenUnion> out;
    for (std::size_t i = 0; i < count; ++i) {
        NearlyOpenUnion u;
        const AnchorId a = random_anchor(space, rng);
        const std::size_t m = uniform_index(rng, 1, 4);
        for (std::size_t k = 0; k < m; ++k) u.balls.push_back(random_ball(space, a, rng));
        out.push_back(std::move(u));
    }
    return out;
}

struct Tally {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    void check(bool ok, const std::string& what) {
        ++cases;
        if (ok) return;
        if (failures++ == 0) first_failure = what;
    }
    bool passed() const { return failures == 0 && cases > 0; }
    std::string summary() const {
        std::string s = std::to_string(cases) + " cases, " + std::to_string(failures) + " failures";
        if (failures) s += " (first: " + first_failure + ")";
        return s;
    }
};

// 1: closed-form distance to the complement of A_n vs grid search
CheckOutcome sphere_distance_formula(std::uint64_t seed, const Scaled& scaled) {
    const kernels::Grid grid{-3.0, 3.0, 0.01};
    const double tol = 2.0 * grid.step;
    Rng rng(seed);
    Tally tally;
    double worst = 0.0;
    const std::size_t total = scaled(500);
    for (std::size_t s = 0; s < total; ++s) {
        const auto kind = static_cast<NormKind>(s % 3);
        const Index n = 1 + (s / 3) % 3;
        SigmaSpace space(SpaceFamily({}, {1, kind}), {Anchor{AnchorId("0"), {}}});
        ZeroSequence z;
        FinitePoint u;
        for (Index i = 1; i <= n; ++i) {
            const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
            const double mag = i < n ? uniform(rng, 0.0, 0.999) : uniform(rng, 1.0, 2.9);
            u.push_back({sign * mag});
            z[i] = u.back();
        }
        const double formula = evaluate_g(space, z);
        const auto spaces = layout(space.family(), n);
        auto outside = [n, kind](std::span<const double> y) {
            for (Index i = 0; i + 1 < n; ++i)
                if (norm(kind, y.subspan(i, 1)) >= 1.0) return true;
            return norm(kind, y.subspan(n - 1, 1)) < 1.0;
        };
        const double oracle = brute_force_set_distance(spaces, u, outside, grid);
        const double err = std::abs(formula - oracle);
        worst = std::max(worst, err);
        tally.check(err <= tol, "n=" + std::to_string(n) + " error " + num(err));
    }
    return {1, "sphere-distance formula matches grid oracle", tally.passed(),
            tally.summary() + ", max error " + num(worst) + " <= " + num(tol)};
}

// 2: single-coordinate change moves g by at most twice the change
CheckOutcome lipschitz_bound(std::uint64_t seed, const Scaled& scaled) {
    const auto space = mixed_space();
    const auto balls = suite_balls(space, seed, 20);
    Rng rng(derive_seed(seed, 2));
    Tally tally;
    const std::size_t per_ball = scaled(500);
    auto random_z = [&](Index max_index) {
        ZeroSequence z;
        const std::size_t k = uniform_index(rng, 0, max_index);
        for (std::size_t j = 0; j < k; ++j) {
            const Index n = uniform_index(rng, 1, max_index);
            const auto& cs = space.family().at(n);
            const double m = uniform(rng, 0.0, 1.0) < 0.2 ? 1.0 : uniform(rng, 0.0, 2.5);
            z[n] = scaled_add(CoordVector(cs.dim, 0.0), m, random_unit_vector(cs, rng));
        }
        return z;
    };
    for (const auto& ball : balls) {
        for (std::size_t s = 0; s < per_ball; ++s) {
            const auto x = h_inverse(space, random_z(7), ball);
            const auto u = h_inverse(space, random_z(7), ball);
            const Index k = uniform_index(rng, 1, 8);
            const auto hx = h_transform(space, x, ball);
            const auto hu = h_transform(space, u, ball);
            const auto hy = h_transform(space, space.splice(x, {k}, u), ball);
            const auto& cs = space.family().at(k);
            auto coord = [&](const ZeroSequence& z) {
                auto it = z.find(k);
                return it == z.end() ? CoordVector(cs.dim, 0.0) : it->second;
            };
            const double lhs = std::abs(evaluate_g(space, hx) - evaluate_g(space, hy));
            const double rhs = 2.0 * norm(cs, subtract(coord(hx), coord(hu))) + kSlack;
            tally.check(lhs <= rhs, "k=" + std::to_string(k) + " lhs " + num(lhs) + " rhs " + num(rhs));
        }
    }
    return {2, "single-coordinate Lipschitz bound for g", tally.passed(), tally.summary()};
}

// 3: ball-product function vanishes on W, has oscillation ρ there, is continuous off W
CheckOutcome ball_product_round_trip(std::uint64_t seed, const Scaled& scaled) {
    const auto space = mixed_space();
    const auto balls = suite_balls(space, seed, 20);
    Rng rng(derive_seed(seed, 3));
    Tally zero, witness, neighborhood;
    NetSpec net;
    net.samples = 16;
    for (std::size_t b = 0; b < balls.size(); ++b) {
        const auto f = build_ball_product_function(space, balls[b]);
        net.seed = derive_seed(seed, 300 + b);
        for (std::size_t s = 0; s < scaled(100); ++s) {
            const auto x = h_inverse(space, random_inside(space, 6, 1.0, rng), balls[b]);
            const double fx = evaluate(space, f, x);
            zero.check(fx == 0.0, "f(x) = " + num(fx));
            const double rho = sphere_gap(space, balls[b], x);
            const auto xm = oscillation_witness(space, f, x, 1 + s % 5);
            const double fw = evaluate(space, f, xm);
            const auto est = oscillation_estimate(space, f, x, net);
            witness.check(rho > 0.0 && rho <= 1.0 && std::abs(fw - rho) <= kSlack &&
                              std::abs(est.certified_lower - rho) <= kSlack &&
                              est.verdict == ContinuityVerdict::Discontinuous,
                          "rho " + num(rho) + " witness " + num(fw) + " lower " + num(est.certified_lower));
        }
        for (std::size_t s = 0; s < scaled(100); ++s) {
            const Index n = uniform_index(rng, 1, 4);
            const auto u = h_inverse(space, random_escape(space, n, 1.0, rng), balls[b]);
            if (classify_region(space, h_transform(space, u, balls[b])).inside) continue;
            const auto box = continuity_neighborhood(space, f, u, kEps);
            const auto check = neighborhood_check(space, f, u, box, kEps, 64, derive_seed(net.seed, s));
            neighborhood.check(check.passed, "max difference " + num(check.max_difference));
        }
    }
    const bool ok = zero.passed() && witness.passed() && neighborhood.passed();
    return {3, "ball-product function: zero on W, witnessed oscillation, continuity neighborhoods", ok,
            "zero: " + zero.summary() + "; witness: " + witness.summary() + "; neighborhood: " +
                neighborhood.summary()};
}

// 4: weighted union is discontinuous exactly on the union, partial sums converge
CheckOutcome union_round_trip(std::uint64_t seed, const Scaled& scaled) {
    const auto space = mixed_space();
    const auto unions = suite_unions(space, seed, 10);
    Rng rng(derive_seed(seed, 4));
    Tally inside, outside, truncation;
    NetSpec net;
    net.samples = 32;
    for (std::size_t k = 0; k < unions.size(); ++k) {
        const auto& uni = unions[k];
        const auto f = build_union_function(space, uni);
        net.seed = derive_seed(seed, 400 + k);
        std::vector<SparsePoint> pts;
        for (const auto& ball : uni.balls) {
            for (std::size_t s = 0; s < scaled(10); ++s) {
                const auto x = h_inverse(space, random_inside(space, 6, 1.0, rng), ball);
                const auto est = oscillation_estimate(space, f, x, net);
                inside.check(est.verdict == ContinuityVerdict::Discontinuous,
                             "lower " + num(est.certified_lower));
                pts.push_back(x);
            }
        }
        std::size_t found = 0;
        for (std::size_t attempt = 0; found < scaled(20) && attempt < 10000; ++attempt) {
            const auto u = random_point(space, uni.balls.front().anchor, 4, 8.0, rng);
            const bool clear = std::all_of(uni.balls.begin(), uni.balls.end(), [&](const BallProduct& b) {
                const auto z = h_transform(space, u, b);
                const auto r = classify_region(space, z);
                return !r.inside && r.escape <= 4 && space.norm_at(r.escape, z.at(r.escape)) >= 1.1;
            });
            if (!clear) continue;
            ++found;
            const auto est = oscillation_estimate(space, f, u, net);
            outside.check(est.verdict == ContinuityVerdict::LikelyContinuous,
                          "deepest upper " + num(est.sampled_upper.back()));
            pts.push_back(u);
        }
        outside.check(found == scaled(20), "only " + std::to_string(found) + " points outside the closures");
        for (std::size_t m = 1; m <= uni.balls.size(); ++m) {
            NearlyOpenUnion head{std::vector<BallProduct>(uni.balls.begin(), uni.balls.begin() +
                                                                                 static_cast<std::ptrdiff_t>(m))};
            const auto partial = build_union_function(space, head);
            const double bound = std::ldexp(1.0, -static_cast<int>(m));
            for (const auto& x : pts) {
                const double diff = std::abs(evaluate(space, f, x) - evaluate(space, partial, x));
                truncation.check(diff <= bound + kSlack, "M'=" + std::to_string(m) + " diff " + num(diff));
            }
        }
    }
    const bool ok = inside.passed() && outside.passed() && truncation.passed();
    return {4, "weighted union: discontinuous on W, continuous off its closure, truncation bound", ok,
            "inside: " + inside.summary() + "; outside: " + outside.summary() + "; truncation: " +
                truncation.summary()};
}

TraceFamily single_component(ComponentKind kind, double radius) {
    return {[kind, radius](Index n) {
        TraceSet set;
        set.components.push_back({kind, FinitePoint(n, CoordVector{0.0}), std::vector<double>(n, radius)});
        return set;
    }};
}

// 5: trace openness of the discontinuity sets, rejection of non-open traces, radii extension
CheckOutcome trace_checks(std::uint64_t seed, const Scaled& scaled) {
    const auto space = mixed_space();
    Tally claimed, rejected, radii;
    std::vector<std::vector<BallProduct>> sets;
    for (const auto& b : suite_balls(space, seed, 20)) sets.push_back({b});
    for (const auto& u : suite_unions(space, seed, 10)) sets.push_back(u.balls);
    for (std::size_t k = 0; k < sets.size(); ++k) {
        const auto traces = ball_product_traces(space, sets[k]);
        claimed.check(all_open(nearly_open_trace_check(space, traces, 4, {})), "analytic, set " + std::to_string(k));
        TraceCheckMode grid;
        grid.kind = TraceCheckMode::Kind::Grid;
        grid.random_points = scaled(32);
        grid.seed = derive_seed(seed, 500 + k);
        claimed.check(all_open(nearly_open_trace_check(space, traces, 4, grid)), "grid, set " + std::to_string(k));
    }

    SigmaSpace line(SpaceFamily({}, {1, NormKind::L2}), {Anchor{AnchorId("0"), {}}});
    auto none_open = [](const std::vector<TraceVerdict>& vs) {
        return std::all_of(vs.begin(), vs.end(), [](const TraceVerdict& v) {
            return v.status == TraceStatus::NotOpenAt && v.witness.has_value();
        });
    };
    rejected.check(none_open(nearly_open_trace_check(line, single_component(ComponentKind::Point, 0.0), 4, {})),
                   "singleton, analytic");
    rejected.check(
        none_open(nearly_open_trace_check(line, single_component(ComponentKind::ClosedBallProduct, 0.5), 4, {})),
        "closed ball, analytic");
    TraceFamily singleton_box{[](Index n) {
        TraceSet set;
        set.black_box = [n](const FinitePoint& z) {
            return z.size() == n && std::all_of(z.begin(), z.end(), [](const CoordVector& c) { return c[0] == 0.0; });
        };
        return set;
    }};
    TraceCheckMode grid;
    grid.kind = TraceCheckMode::Kind::Grid;
    for (Index n = 1; n <= 4; ++n) grid.candidates.push_back(FinitePoint(n, CoordVector{0.0}));
    rejected.check(none_open(nearly_open_trace_check(line, singleton_box, 4, grid)), "singleton, grid");

    try {
        const auto ext = radii_extension(line, single_component(ComponentKind::OpenBallProduct, 1.0),
                                         line.base_point(AnchorId("0")), 3);
        const std::vector<double> expected{0.5, 0.25, 0.125};
        radii.check(ext.radii == expected, "radii " + num(ext.radii[0]) + ", " + num(ext.radii[1]) + ", " +
                                               num(ext.radii[2]));
        std::vector<double> inflate;
        for (std::size_t j = 0; j < ext.margins.size(); ++j) {
            const Index n = ext.support + j;
            const kernels::Grid g{-3.0, 3.0, n <= 2 ? 1e-3 : 1e-2};
            std::vector<double> infl(ext.radii.begin(), ext.radii.begin() + static_cast<std::ptrdiff_t>(n - 1));
            if (j == 0) infl.assign(n, 0.0);
            infl.resize(n, 0.0);
            const auto spaces = layout(line.family(), n);
            const double oracle = brute_force_set_distance(
                spaces, kernels::DistanceTarget{FinitePoint(n, CoordVector{0.0}), infl},
                [](std::span<const double> y) {
                    return std::any_of(y.begin(), y.end(), [](double c) { return std::abs(c) >= 1.0; });
                },
                g);
            radii.check(std::abs(oracle - ext.margins[j]) <= 2.0 * g.step,
                        "margin " + num(ext.margins[j]) + " vs oracle " + num(oracle));
        }
    } catch (const Error& e) {
        radii.check(false, e.what());
    }
    try {
        radii_extension(line, single_component(ComponentKind::Point, 0.0), line.base_point(AnchorId("0")), 3);
        radii.check(false, "singleton accepted by radii extension");
    } catch (const Error& e) {
        radii.check(e.code() == ErrorCode::NotNearlyOpen, e.what());
    }
    const bool ok = claimed.passed() && rejected.passed() && radii.passed();
    return {5, "trace openness, non-open rejection, radii extension", ok,
            "claimed: " + claimed.summary() + "; rejected: " + rejected.summary() + "; radii: " + radii.summary()};
}

// 6: component indicator is SSC everywhere yet oscillates by 1 everywhere
CheckOutcome indicator_checks(std::uint64_t seed, const Scaled& scaled) {
    const auto space = mixed_space();
    Rng rng(derive_seed(seed, 6));
    const auto f = component_indicator(space, space.base_point(AnchorId("a")), 0.0, 1.0);
    Tally ssc, osc;
    NetSpec net;
    for (std::size_t s = 0; s < scaled(50); ++s) {
        const auto u = random_point(space, random_anchor(space, rng), 6, 3.0, rng);
        net.seed = derive_seed(seed, 600 + s);
        const Index t = uniform_index(rng, 1, 8);
        const auto rep = ssc_check(space, f, u, t, net, kEps);
        const bool exact = std::all_of(rep.per_level.begin(), rep.per_level.end(), [](double v) { return v == 0.0; });
        ssc.check(rep.passed && exact, "largest difference " + num(*std::max_element(rep.per_level.begin(),
                                                                                        rep.per_level.end())));
        const auto est = oscillation_estimate(space, f, u, net);
        osc.check(est.certified_lower == 1.0 && est.verdict == ContinuityVerdict::Discontinuous,
                  "lower " + num(est.certified_lower));
    }
    return {6, "component indicator: SSC with oscillation 1 everywhere", ssc.passed() && osc.passed(),
            "ssc: " + ssc.summary() + "; oscillation: " + osc.summary()};
}

// 7: splice criterion finds T_0 exactly for continuous functions
CheckOutcome criterion_calibration(std::uint64_t seed, const Scaled& scaled) {
    const auto space = mixed_space();
    Rng rng(derive_seed(seed, 7));
    constexpr Index kBudget = 8;
    const std::size_t samples = 64;
    Tally continuous, off_w, indicator, inside;

    struct Candidate {
        ConstructedFunction f;
        std::set<Index> support;
    };
    const std::vector<Candidate> candidates{
        {coordinate_norm(1), {1}},
        {algebra(AlgebraOp::Add, {coordinate_norm(1), coordinate_norm(2)}), {1, 2}},
        {algebra(AlgebraOp::Mul,
                 {coordinate_norm(2), algebra(AlgebraOp::Abs, {algebra(AlgebraOp::Sub, {coordinate_norm(3),
                                                                                         constant(1.0)})})}),
         {2, 3}},
        {algebra(AlgebraOp::Max, {coordinate_norm(1), coordinate_norm(4)}), {1, 4}},
        {custom("wave",
                [](const SigmaSpace& sp, const SparsePoint& x) {
                    const auto x1 = sp.coordinate(x, 1);
                    const double r = sp.coordinate_norm(x, 2);
                    return std::sin(3.0 * x1[0]) + r * r;
                }),
         {1, 2}},
    };
    std::uint64_t stream = 700;
    for (const auto& c : candidates) {
        for (std::size_t s = 0; s < scaled(20); ++s) {
            const auto a = random_point(space, random_anchor(space, rng), 5, 2.0, rng);
            const auto r = splice_criterion_check(space, c.f, a, kEps, kBudget, default_criterion_boxes(a, kBudget),
                                                  samples, derive_seed(seed, stream++));
            const bool within = std::includes(c.support.begin(), c.support.end(), r.subset.begin(), r.subset.end());
            continuous.check(r.found && within, c.f.describe() + (r.found ? " subset outside support" : " not found"));
        }
    }

    const auto balls = suite_balls(space, seed, 5);
    for (const auto& ball : balls) {
        const auto f = build_ball_product_function(space, ball);
        for (std::size_t s = 0; s < scaled(4); ++s) {
            const Index n = uniform_index(rng, 1, 4);
            const auto u = h_inverse(space, random_escape(space, n, 1.0, rng), ball);
            if (classify_region(space, h_transform(space, u, ball)).inside) continue;
            auto boxes = default_criterion_boxes(u, kBudget);
            boxes.push_back(continuity_neighborhood(space, f, u, kEps));
            const auto r = splice_criterion_check(space, f, u, kEps, kBudget, boxes, samples, derive_seed(seed, stream++));
            off_w.check(r.found, "escape point not found");
        }
        for (std::size_t s = 0; s < scaled(4); ++s) {
            const auto x = h_inverse(space, random_inside(space, 6, 0.9, rng), ball);
            const auto r = splice_criterion_check(space, f, x, kEps, kBudget, default_criterion_boxes(x, kBudget),
                                                  samples, derive_seed(seed, stream++));
            inside.check(!r.found, "found inside W");
        }
    }

    const auto ind = component_indicator(space, space.base_point(AnchorId("b")), 0.0, 1.0);
    for (std::size_t s = 0; s < scaled(20); ++s) {
        const auto a = random_point(space, random_anchor(space, rng), 5, 2.0, rng);
        const auto r = splice_criterion_check(space, ind, a, kEps, kBudget, default_criterion_boxes(a, kBudget),
                                              samples, derive_seed(seed, stream++));
        indicator.check(!r.found, "found for the indicator");
    }
    const bool ok = continuous.passed() && off_w.passed() && indicator.passed() && inside.passed();
    return {7, "splice criterion: FOUND for continuous points, NOT_FOUND at discontinuities", ok,
            "continuous: " + continuous.summary() + "; escape points: " + off_w.summary() +
                "; indicator: " + indicator.summary() + "; inside W: " + inside.summary()};
}

BoxNeighborhood random_box(const SparsePoint& center, Rng& rng) {
    BoxNeighborhood box{center, {}};
    const std::size_t k = uniform_index(rng, 1, 5);
    for (std::size_t j = 0; j < k; ++j) box.radii[uniform_index(rng, 1, 8)] = std::pow(10.0, uniform(rng, -4.0, 0.5));
    return box;
}

std::vector<SparsePoint> sample_in_box(const SigmaSpace& space, const BoxNeighborhood& box, std::size_t count,
                                       Rng& rng) {
    std::vector<SparsePoint> out;
    for (std::size_t i = 0; i < count; ++i) {
        auto x = random_point(space, box.center.anchor, 8, 3.0, rng);
        for (const auto& [n, r] : box.radii)
            x = space.with_coordinate(x, n,
                                      random_in_ball(space.family().at(n), space.coordinate(box.center, n), r, rng));
        out.push_back(std::move(x));
    }
    return out;
}

// 8: S-open component predicates, complements, density, projective symmetry
CheckOutcome s_topology_checks(std::uint64_t seed, const Scaled& scaled) {
    const auto space = mixed_space();
    Rng rng(derive_seed(seed, 8));
    Tally open, complement, density, symmetry;
    std::vector<AnchorId> ids;
    for (const auto& kv : space.anchors()) ids.push_back(kv.first);

    std::vector<SparsePoint> sample;
    for (std::size_t i = 0; i < scaled(60); ++i) sample.push_back(random_point(space, ids[i % ids.size()], 6, 3.0, rng));
    std::uint64_t stream = 800;
    for (unsigned mask = 0; mask < (1u << ids.size()); ++mask) {
        std::set<AnchorId> chosen;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (mask & (1u << i)) chosen.insert(ids[i]);
        const auto set = component_union(chosen);
        MutationProbe probe{derive_seed(seed, stream++)};
        const auto v = s_open_probe(space, set, sample, probe);
        open.check(v.passed() && v.certainty == Certainty::Certified, "components mask " + std::to_string(mask));
        const auto c = complement_closure_check(space, set, sample, probe);
        complement.check(c.consistent && c.direct.passed() && c.complement.passed(),
                         "complement mask " + std::to_string(mask));
    }

    for (std::size_t s = 0; s < scaled(100); ++s) {
        const auto rep = random_point(space, ids[uniform_index(rng, 0, ids.size() - 1)], 6, 3.0, rng);
        const auto box = random_box(random_point(space, ids[uniform_index(rng, 0, ids.size() - 1)], 6, 3.0, rng),
                                    rng);
        const auto w = density_witness(space, rep, box);
        density.check(space.box_contains(box, w) && space.same_component(w, rep), "density pair " + std::to_string(s));
    }

    for (std::size_t s = 0; s < scaled(20); ++s) {
        const auto center = random_point(space, ids[uniform_index(rng, 0, ids.size() - 1)], 6, 3.0, rng);
        const auto box = random_box(center, rng);
        SetPredicate inside{[&space, box](const SparsePoint& x) { return space.box_contains(box, x); },
                            SetTag::BlackBox, "box"};
        MutationProbe probe{derive_seed(seed, stream++)};
        const auto v = projective_symmetry_check(space, inside, center, sample_in_box(space, box, 30, rng), probe);
        const Index t = box.radii.begin()->first;
        const auto lim = coordinated_limit_check(space, center, t, box, {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5}, probe);
        symmetry.check(v.passed() && lim.passed && lim.delta > 0.0, "box " + std::to_string(s));
    }
    const bool ok = open.passed() && complement.passed() && density.passed() && symmetry.passed();
    return {8, "S-topology probes: open components, complements, density, projective symmetry", ok,
            "open: " + open.summary() + "; complement: " + complement.summary() + "; density: " + density.summary() +
                "; symmetry: " + symmetry.summary()};
}

}  // namespace

std::vector<CheckOutcome> run_suite(const SuiteOptions& options) {
    using Check = std::function<CheckOutcome(std::uint64_t, const Scaled&)>;
    const std::vector<Check> checks{sphere_distance_formula, lipschitz_bound, ball_product_round_trip,
                                    union_round_trip,        trace_checks,    indicator_checks,
                                    criterion_calibration,   s_topology_checks};
    const Scaled scaled(options.scale);
    std::vector<CheckOutcome> out;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!options.only.empty() && !options.only.contains(id)) continue;
        try {
            out.push_back(checks[i](derive_seed(options.seed, static_cast<std::uint64_t>(id)), scaled));
        } catch (const std::exception& e) {
            out.push_back({id, "check " + std::to_string(id), false, std::string("error: ") + e.what()});
        }
    }
    return out;
}

}  // namespace ssc
