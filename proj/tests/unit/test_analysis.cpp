#include <doctest.h>

#include <cmath>

#include "ssc/analysis.hpp"
#include "ssc/error.hpp"

using namespace ssc;

namespace {

SigmaSpace line() {
    return SigmaSpace(SpaceFamily({}, {1, NormKind::L2}),
                      {Anchor{AnchorId("0"), {}}, Anchor{AnchorId("1"), {{2, {1.0}}}}});
}

SparsePoint pt(const SigmaSpace& s, std::map<Index, CoordVector> ov) { return s.make_point(AnchorId("0"), std::move(ov)); }

ConstructedFunction unit_f(const SigmaSpace& s) {
    return build_ball_product_function(s, {AnchorId("0"), s.base_point(AnchorId("0")), Radii{{}, 1.0}});
}

NetSpec net(std::uint64_t seed) {
    NetSpec n;
    n.seed = seed;
    return n;
}

TraceFamily singleton_traces() {
    return {[](Index n) {
        TraceSet set;
        set.components.push_back({ComponentKind::Point, FinitePoint(n, CoordVector{0.0}), {}});
        return set;
    }};
}

}  // namespace

TEST_CASE("oscillation at the center of W is 1") {
    const auto s = line();
    const auto f = unit_f(s);
    const auto est = oscillation_estimate(s, f, s.base_point(AnchorId("0")), net(1));
    CHECK(est.certified_lower == 1.0);
    CHECK(est.verdict == ContinuityVerdict::Discontinuous);
    for (std::size_t j = 1; j < est.sampled_upper.size(); ++j) CHECK(est.sampled_upper[j] <= est.sampled_upper[j - 1]);
    for (const auto& w : est.witnesses) CHECK(std::abs(evaluate(s, f, w.first) - evaluate(s, f, w.second)) == w.value);
}

TEST_CASE("oscillation outside the closure of W vanishes") {
    const auto s = line();
    const auto est = oscillation_estimate(s, unit_f(s), pt(s, {{1, {3.0}}}), net(2));
    CHECK(est.certified_lower == 0.0);
    CHECK(est.sampled_upper.back() < kContinuityTol);
    CHECK(est.verdict == ContinuityVerdict::LikelyContinuous);
    const auto c = oscillation_estimate(s, constant(0.7), pt(s, {{2, {0.1}}}), net(3));
    CHECK(c.certified_lower == 0.0);
    CHECK(c.verdict == ContinuityVerdict::LikelyContinuous);
}

TEST_CASE("oscillation witnesses") {
    const auto s = line();
    const auto f = unit_f(s);
    const auto u = pt(s, {{1, {0.5}}, {2, {-0.25}}});
    CHECK(sphere_gap(s, f.as<BallProductParams>().ball, u) == 0.5);
    Index last = 0;
    for (Index m = 1; m <= 5; ++m) {
        const auto x = oscillation_witness(s, f, u, m);
        CHECK(s.defect(x, u) == Defect{1});
        const Index moved = x.overrides.rbegin()->first;
        CHECK(moved > last);
        last = moved;
        CHECK(evaluate(s, f, x) == doctest::Approx(0.5));
    }
    CHECK_THROWS_WITH_AS(oscillation_witness(s, f, pt(s, {{1, {2.0}}}), 1), doctest::Contains("PRECONDITION"), Error);
}

TEST_CASE("strong separate continuity") {
    const auto s = line();
    const auto n = net(4);
    const auto rep = ssc_check(s, unit_f(s), pt(s, {{1, {0.2}}}), 1, n, 1e-2);
    CHECK(rep.passed);
    for (std::size_t j = 0; j < rep.per_level.size(); ++j)
        CHECK(rep.per_level[j] <= 2.0 * n.base_radius * std::pow(n.shrink, static_cast<double>(j)) + 1e-12);
    const auto jump = custom("coordinate 1 nonzero",
                             [](const SigmaSpace& sp, const SparsePoint& x) { return sp.coordinate_norm(x, 1) > 0 ? 1.0 : 0.0; });
    CHECK_FALSE(ssc_check(s, jump, s.base_point(AnchorId("0")), 1, n, 1e-2).passed);
}

TEST_CASE("separate continuity") {
    const auto s = line();
    const std::vector<double> offsets{1e-1, 1e-2, 1e-3, 1e-4};
    const auto u = pt(s, {{1, {0.5}}});
    CHECK(separate_continuity_check(s, coordinate_norm(1), u, 1, offsets, 1e-2).passed);
    CHECK(separate_continuity_check(s, component_indicator(s, u, 0.0, 1.0), u, 2, offsets, 1e-2).passed);
    for (Index t = 1; t <= 4; ++t) CHECK(separate_continuity_check(s, unit_f(s), u, t, offsets, 1e-2, t).passed);
}

TEST_CASE("continuity neighborhoods") {
    const auto s = line();
    const auto f = unit_f(s);
    const auto on_sphere = pt(s, {{1, {0.5}}, {2, {1.0}}});
    CHECK(evaluate(s, f, on_sphere) == 0.0);
    const auto b1 = continuity_neighborhood(s, f, on_sphere, 0.05);
    CHECK(neighborhood_check(s, f, on_sphere, b1, 0.05, 1000, 5).passed);
    const auto far = pt(s, {{1, {0.5}}, {2, {2.0}}});
    const auto b2 = continuity_neighborhood(s, f, far, 0.1);
    CHECK(neighborhood_check(s, f, far, b2, 0.1, 1000, 6).passed);
    CHECK(continuity_neighborhood(s, f, far, 1.5).radii.empty());
    CHECK_THROWS_WITH_AS(continuity_neighborhood(s, f, far, 0.0), doctest::Contains("INVALID_ARGUMENT"), Error);
    CHECK_THROWS_WITH_AS(continuity_neighborhood(s, f, pt(s, {{1, {0.5}}}), 0.1),
                         doctest::Contains("PRECONDITION"), Error);
}

TEST_CASE("splice criterion") {
    const auto s = line();
    const auto a = pt(s, {{1, {0.3}}, {3, {1.0}}});
    const auto proj = splice_criterion_check(s, coordinate_norm(1), a, 1e-3, 4, default_criterion_boxes(a, 4), 32, 7);
    CHECK(proj.found);
    CHECK(proj.subset == std::set<Index>{1});
    CHECK(proj.box_index == 0);

    const auto ind = component_indicator(s, s.base_point(AnchorId("0")), 0.0, 1.0);
    CHECK_FALSE(splice_criterion_check(s, ind, a, 0.5, 4, default_criterion_boxes(a, 4), 32, 8).found);

    const auto f = unit_f(s);
    const auto u = pt(s, {{1, {0.5}}, {2, {2.0}}});
    auto boxes = default_criterion_boxes(u, 4);
    boxes.push_back(continuity_neighborhood(s, f, u, 1e-2));
    const auto r = splice_criterion_check(s, f, u, 1e-2, 4, boxes, 64, 9);
    CHECK(r.found);
    CHECK(r.subset == std::set<Index>{1, 2});
}

TEST_CASE("constancy on components") {
    const auto s = line();
    const auto w = s.base_point(AnchorId("0"));
    const auto far = pt(s, {{5, {10.0}}});
    const std::vector<std::pair<SparsePoint, SparsePoint>> pairs{{w, far}, {s.base_point(AnchorId("1")), s.base_point(AnchorId("1"))}};
    CHECK(s_continuity_check(s, component_indicator(s, w, 0.0, 1.0), pairs).passed);
    CHECK(s_continuity_check(s, constant(1.0), pairs).passed);
    const auto bad = s_continuity_check(s, unit_f(s), {{w, far}});
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.failure.has_value());
    CHECK(evaluate(s, unit_f(s), bad.failure->second) == 1.0);
}

TEST_CASE("finite traces") {
    const auto s = line();
    const auto f = unit_f(s);
    const auto traces = ball_product_traces(s, {f.as<BallProductParams>().ball});
    for (auto kind : {TraceCheckMode::Kind::Analytic, TraceCheckMode::Kind::Grid}) {
        TraceCheckMode mode;
        mode.kind = kind;
        const auto v = nearly_open_trace_check(s, traces, 2, mode);
        CHECK(all_open(v));
        CHECK(v.size() == 2);
    }
    const auto single = nearly_open_trace_check(s, singleton_traces(), 1, {});
    REQUIRE(single.size() == 1);
    CHECK(single[0].status == TraceStatus::NotOpenAt);
    CHECK(single[0].witness.has_value());
}

TEST_CASE("grid oracles") {
    const std::vector<CoordSpace> spaces{{1, NormKind::L2}, {1, NormKind::L2}};
    const kernels::Grid grid{-1.0, 1.0, 0.25};
    const FinitePoint u{{0.5}, {-0.25}};
    CHECK(brute_force_set_distance(spaces, u, [](std::span<const double>) { return true; }, grid) == 0.0);
    CHECK(brute_force_set_distance(spaces, u, [](std::span<const double> y) { return y[0] == 0.5 && y[1] == -0.25; },
                                   grid) == 0.0);
    CHECK_THROWS_WITH_AS(brute_force_set_distance(spaces, u, [](std::span<const double>) { return false; }, grid),
                         doctest::Contains("INFEASIBLE"), Error);

    const auto s = line();
    const auto w = s.base_point(AnchorId("0"));
    CHECK(brute_force_oscillation(s, constant(3.0), w, {1, 2}, {0.5, 0.5}, 0.05) == 0.0);
    const auto step = custom("outside", [](const SigmaSpace& sp, const SparsePoint& x) {
        return sp.coordinate_norm(x, 1) >= 1.0 ? 1.0 : 0.0;
    });
    CHECK(brute_force_oscillation(s, step, pt(s, {{1, {1.0}}}), {1}, {0.1}, 0.01) == 1.0);

    const auto f = unit_f(s);
    const double lower = oscillation_estimate(s, f, w, net(10)).certified_lower;
    const double grid_osc = brute_force_oscillation(s, f, w, {1, 2}, {0.5, 2.0}, 0.01);
    CHECK(std::abs(grid_osc - lower) <= 0.02);
}
