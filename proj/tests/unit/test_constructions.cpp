#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ssc/analysis.hpp"
#include "ssc/constructions.hpp"
#include "ssc/error.hpp"
#include "ssc/random.hpp"

using namespace ssc;

namespace {

SigmaSpace line() {
    return SigmaSpace(SpaceFamily({}, {1, NormKind::L2}),
                      {Anchor{AnchorId("0"), {}}, Anchor{AnchorId("1"), {{1, {1.0}}}}});
}

SparsePoint pt(const SigmaSpace& s, std::map<Index, CoordVector> ov, const char* anchor = "0") {
    return s.make_point(AnchorId(anchor), std::move(ov));
}

BallProduct unit_ball(const SigmaSpace& s) { return {AnchorId("0"), s.base_point(AnchorId("0")), Radii{{}, 1.0}}; }

TraceFamily cube_traces() {
    return {[](Index n) {
        TraceSet set;
        set.components.push_back({ComponentKind::OpenBallProduct, FinitePoint(n, CoordVector{0.0}),
                                   std::vector<double>(n, 1.0)});
        return set;
    }};
}

// complement of the escape-at-2 set {|y_1| < 1 <= |y_2|}
bool outside_a2(std::span<const double> y) { return std::abs(y[0]) >= 1.0 || std::abs(y[1]) < 1.0; }

}  // namespace

TEST_CASE("h transform") {
    const auto s = line();
    const BallProduct ball{AnchorId("0"), pt(s, {{1, {1.0}}}), Radii{{2.0}, 1.0}};
    const auto z = h_transform(s, pt(s, {{1, {5.0}}}), ball);
    CHECK(z.at(1) == CoordVector{2.0});
    CHECK(h_transform(s, ball.center, ball).empty());
    const auto x = pt(s, {{1, {-0.5}}, {4, {3.0}}});
    CHECK(h_inverse(s, h_transform(s, x, ball), ball) == x);
}

TEST_CASE("region classification") {
    const auto s = line();
    CHECK(classify_region(s, {}) == RegionTag::in());
    CHECK(classify_region(s, {{1, {0.5}}, {2, {2.0}}}) == RegionTag::escape_at(2));
    CHECK(classify_region(s, {{3, {1.0}}}) == RegionTag::escape_at(3));
}

TEST_CASE("g values") {
    const auto s = line();
    const ZeroSequence z{{1, {0.5}}, {2, {2.0}}};
    CHECK(evaluate_g(s, z) == 0.5);
    // oracle: grid distance from p_2(z) to the complement of A_2
    const auto spaces = layout(s.family(), 2);
    const double oracle =
        brute_force_set_distance(spaces, FinitePoint{{0.5}, {2.0}},
                                 outside_a2,
                                 kernels::Grid{-3.0, 3.0, 0.01});
    CHECK(std::abs(oracle - 0.5) <= 0.02);
    CHECK(evaluate_g(s, {{1, {0.3}}}) == 0.0);
    CHECK(evaluate_g(s, {{1, {1.0}}}) == 0.0);
}

TEST_CASE("ball-product function values") {
    const auto s = line();
    const auto f = build_ball_product_function(s, unit_ball(s));
    CHECK(f.kind() == FunctionKind::BallProduct);
    CHECK(evaluate(s, f, s.base_point(AnchorId("0"))) == 0.0);
    CHECK(evaluate(s, f, pt(s, {{1, {3.0}}})) == 1.0);
    CHECK(evaluate(s, f, pt(s, {{1, {0.5}}, {2, {1.25}}})) == doctest::Approx(0.25));
    CHECK_THROWS_WITH_AS(evaluate(s, f, s.base_point(AnchorId("1"))), doctest::Contains("ANCHOR_MISMATCH"), Error);
    CHECK_THROWS_WITH_AS(build_ball_product_function(s, {AnchorId("0"), s.base_point(AnchorId("0")), Radii{{1.0, 0.0}, 1.0}}),
                         doctest::Contains("RADIUS_NONPOSITIVE"), Error);
}

TEST_CASE("property: ball-product function has range [0,1], vanishes on W and is 1 far out") {
    const auto s = line();
    Rng rng(21);
    for (int i = 0; i < 200; ++i) {
        const BallProduct ball{AnchorId("0"), pt(s, {{1, {uniform(rng, -1, 1)}}, {3, {uniform(rng, -1, 1)}}}),
                               Radii{{uniform(rng, 0.5, 2), uniform(rng, 0.5, 2)}, uniform(rng, 0.5, 1.5)}};
        const auto f = build_ball_product_function(s, ball);
        std::map<Index, CoordVector> in;
        for (Index n = 1; n <= 5; ++n)
            in[n] = random_in_ball(s.family().at(n), s.coordinate(ball.center, n), ball.radii.at(n), rng);
        const auto x = pt(s, in);
        REQUIRE(ball_product_contains(s, ball, x));
        CHECK(evaluate(s, f, x) == 0.0);
        const double c = s.coordinate(ball.center, 1)[0];
        CHECK(evaluate(s, f, s.with_coordinate(x, 1, {c + 2.5 * ball.radii.at(1) * (i % 2 ? 1 : -1)})) == 1.0);
        std::map<Index, CoordVector> any;
        for (Index n = 1; n <= 4; ++n) any[n] = {uniform(rng, -4, 4)};
        const double v = evaluate(s, f, pt(s, any));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("weighted union") {
    const auto s = line();
    CHECK_THROWS_WITH_AS(build_union_function(s, {}), doctest::Contains("EMPTY_UNION"), Error);
    const auto b1 = unit_ball(s);
    const BallProduct b2{AnchorId("0"), pt(s, {{1, {3.0}}}), Radii{{}, 1.0}};
    const auto one = build_union_function(s, {{b1}});
    const auto child = build_ball_product_function(s, b1);
    Rng rng(22);
    for (int i = 0; i < 50; ++i) {
        const auto x = pt(s, {{1, {uniform(rng, -3, 3)}}, {2, {uniform(rng, -3, 3)}}});
        CHECK(evaluate(s, one, x) == 0.5 * evaluate(s, child, x));
    }
    const auto two = build_union_function(s, {{b1, b2}});
    const auto x = pt(s, {{1, {0.5}}});
    const double c = evaluate(s, build_ball_product_function(s, b2), x);
    CHECK(c > 0.0);
    CHECK(evaluate(s, two, x) == 0.25 * c);
    CHECK(ball_products_of(two).size() == 2);
}

TEST_CASE("component indicator") {
    const auto s = line();
    const auto f = component_indicator(s, s.base_point(AnchorId("0")), 0.0, 1.0);
    CHECK_FALSE(f.anchor().has_value());
    CHECK(evaluate(s, f, pt(s, {{4, {9.0}}})) == 0.0);
    CHECK(evaluate(s, f, s.base_point(AnchorId("1"))) == 1.0);
}

TEST_CASE("algebra and series") {
    const auto s = line();
    const auto x = pt(s, {{1, {-3.0}}, {2, {4.0}}});
    const auto n1 = coordinate_norm(1);
    const auto n2 = coordinate_norm(2);
    CHECK(evaluate(s, algebra(AlgebraOp::Add, {n1, n2}), x) == 7.0);
    CHECK(evaluate(s, algebra(AlgebraOp::Sub, {n1, n2}), x) == -1.0);
    CHECK(evaluate(s, algebra(AlgebraOp::Mul, {n1, n2}), x) == 12.0);
    CHECK(evaluate(s, algebra(AlgebraOp::Abs, {algebra(AlgebraOp::Sub, {n1, n2})}), x) == 1.0);
    CHECK(evaluate(s, algebra(AlgebraOp::Min, {n1, n2}), x) == 3.0);
    CHECK(evaluate(s, algebra(AlgebraOp::Max, {n1, n2}), x) == 4.0);
    CHECK(evaluate(s, series({0.5, 0.25}, {n1, constant(2.0)}, 0.1), x) == 2.0);
    CHECK(evaluate(s, custom("twice", [](const SigmaSpace& sp, const SparsePoint& p) {
                       return 2.0 * sp.coordinate_norm(p, 2);
                   }), x) == 8.0);
}

TEST_CASE("radii extension on the open cube") {
    const auto s = line();
    const auto ext = radii_extension(s, cube_traces(), s.base_point(AnchorId("0")), 3);
    CHECK(ext.support == 1);
    CHECK(ext.radii == std::vector<double>{0.5, 0.25, 0.125});
    // oracle margins: grid distance from the closed product to the complement
    REQUIRE(ext.margins.size() == 3);
    const std::vector<std::vector<double>> inflate{{0.0}, {0.5, 0.0}, {0.5, 0.25, 0.0}};
    for (std::size_t j = 0; j < 3; ++j) {
        const Index n = j + 1;
        const kernels::Grid g{-2.0, 2.0, n <= 2 ? 1e-3 : 1e-2};
        const double oracle = brute_force_set_distance(
            layout(s.family(), n), kernels::DistanceTarget{FinitePoint(n, CoordVector{0.0}), inflate[j]},
            [](std::span<const double> y) { return std::any_of(y.begin(), y.end(), [](double c) { return std::abs(c) >= 1.0; }); },
            g);
        CHECK(std::abs(oracle - ext.margins[j]) <= 2.0 * g.step);
    }
}

TEST_CASE("radii extension rejects boundary points") {
    const auto s = line();
    CHECK_THROWS_WITH_AS(radii_extension(s, cube_traces(), pt(s, {{1, {1.0}}}), 2),
                         doctest::Contains("NOT_NEARLY_OPEN"), Error);
}
