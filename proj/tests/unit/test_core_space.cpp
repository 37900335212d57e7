#include <doctest.h>

#include <cmath>

#include "ssc/core_space.hpp"
#include "ssc/error.hpp"
#include "ssc/kernels.hpp"
#include "ssc/random.hpp"

using namespace ssc;

namespace {

SigmaSpace line_space(std::vector<Anchor> anchors = {Anchor{AnchorId("0"), {}}}) {
    return SigmaSpace(SpaceFamily({}, {1, NormKind::L2}), std::move(anchors));
}

SigmaSpace mixed_space() {
    return SigmaSpace(SpaceFamily({{1, NormKind::L2}, {2, NormKind::L1}, {3, NormKind::LInf}}, {2, NormKind::L2}),
                      {Anchor{AnchorId("a"), {}}, Anchor{AnchorId("b"), {{2, {1.0, -1.0}}, {4, {0.5, 0.5}}}}});
}

SparsePoint random_point(const SigmaSpace& space, const AnchorId& anchor, Rng& rng) {
    std::map<Index, CoordVector> ov;
    const auto k = uniform_index(rng, 0, 5);
    for (std::size_t j = 0; j < k; ++j) {
        const Index n = uniform_index(rng, 1, 7);
        CoordVector v(space.family().at(n).dim);
        for (auto& c : v) c = uniform(rng, -2.0, 2.0);
        ov[n] = v;
    }
    return space.make_point(anchor, ov);
}

}  // namespace

TEST_CASE("space family lookup falls back to the tail") {
    SpaceFamily fam({{1, NormKind::L1}, {3, NormKind::LInf}}, {2, NormKind::L2});
    CHECK(fam.at(1) == CoordSpace{1, NormKind::L1});
    CHECK(fam.at(2) == CoordSpace{3, NormKind::LInf});
    CHECK(fam.at(3) == CoordSpace{2, NormKind::L2});
    CHECK(fam.at(1000) == CoordSpace{2, NormKind::L2});
    CHECK_THROWS_AS(fam.at(0), Error);
    CHECK_THROWS_AS(SpaceFamily({{0, NormKind::L1}}, {1, NormKind::L2}), Error);
}

TEST_CASE("coordinate lookup") {
    const auto space = line_space({Anchor{AnchorId("0"), {}}, Anchor{AnchorId("three"), {{1, {3.0}}}}});
    const auto x = space.make_point(AnchorId("0"), {{2, {5.0}}});
    CHECK(space.coordinate(x, 2) == CoordVector{5.0});
    CHECK(space.coordinate(x, 7) == CoordVector{0.0});
    CHECK(space.coordinate(space.base_point(AnchorId("three")), 1) == CoordVector{3.0});
    CHECK_THROWS_WITH_AS(space.make_point(AnchorId("nope"), {}), doctest::Contains("LOOKUP"), Error);
}

TEST_CASE("norms") {
    const std::vector<double> v{3.0, 4.0};
    CHECK(norm(NormKind::L2, v) == 5.0);
    CHECK(norm(NormKind::L1, v) == 7.0);
    CHECK(norm(NormKind::LInf, std::vector<double>{-2.0, 1.0}) == 2.0);
}

TEST_CASE("canonical form drops overrides equal to the anchor") {
    const auto space = mixed_space();
    const auto x = space.make_point(AnchorId("b"), {{2, {1.0, -1.0}}, {3, {0.0, 0.0, 0.0}}, {5, {1.0, 2.0}}});
    CHECK(x.overrides.size() == 1);
    CHECK(x.overrides.count(5) == 1);
    CHECK_THROWS_WITH_AS(space.make_point(AnchorId("a"), {{2, {1.0}}}), doctest::Contains("DIMENSION_MISMATCH"), Error);
}

TEST_CASE("splice examples") {
    const auto space = line_space();
    const auto a = space.base_point(AnchorId("0"));
    const auto x = space.make_point(AnchorId("0"), {{1, {5.0}}, {3, {2.0}}});
    CHECK(space.splice(a, {1}, x).overrides == std::map<Index, CoordVector>{{1, {5.0}}});
    CHECK(space.splice(a, {}, x) == a);
    const auto once = space.splice(a, {1, 3}, x);
    CHECK(space.splice(a, {1, 3}, once) == once);
}

TEST_CASE("defect, components and sigma_n") {
    const auto space = line_space({Anchor{AnchorId("0"), {}}, Anchor{AnchorId("1"), {}}});
    const auto x = space.make_point(AnchorId("0"), {{1, {1.0}}});
    const auto y = space.make_point(AnchorId("0"), {{1, {1.0}}, {4, {2.0}}});
    CHECK(space.defect(x, x) == Defect{0});
    CHECK(space.defect(x, y) == Defect{1});
    CHECK_FALSE(space.defect(x, space.make_point(AnchorId("1"), {{1, {1.0}}})).has_value());
    CHECK(space.same_component(x, x));
    CHECK_FALSE(space.same_component(x, space.base_point(AnchorId("1"))));
    const auto z = space.make_point(AnchorId("0"), {{2, {1.0}}, {3, {1.0}}});
    REQUIRE(space.defect(x, z) == Defect{3});
    CHECK_FALSE(space.in_sigma_n(x, z, 2));
    CHECK(space.in_sigma_n(x, z, 3));
}

TEST_CASE("truncated distance") {
    const auto space = line_space();
    const auto x = space.make_point(AnchorId("0"), {{1, {0.5}}, {2, {2.0}}});
    const auto o = space.base_point(AnchorId("0"));
    CHECK(space.dist_d_n(x, x, 5) == 0.0);
    CHECK(space.dist_d_n(x, o, 2) == 2.0);
    CHECK(space.dist_d_n(x, o, 1) == 0.5);
}

TEST_CASE("distance to the unit sphere") {
    const CoordSpace l2{2, NormKind::L2};
    CHECK(dist_to_unit_sphere(l2, std::vector<double>{0.0, 0.0}) == 1.0);
    CHECK(dist_to_unit_sphere(l2, std::vector<double>{0.6, 0.8}) == doctest::Approx(0.0).epsilon(1e-15));
    // oracle: sampled sphere, within twice its covering radius
    const double s = 1e-3;
    const double oracle = kernels::serial::sphere_distance(l2, std::vector<double>{3.0, 4.0}, s);
    CHECK(std::abs(oracle - 4.0) <= 2.0 * kernels::sphere_sample_resolution(2, s));
    CHECK(dist_to_unit_sphere(l2, std::vector<double>{3.0, 4.0}) == 4.0);
}

TEST_CASE("box membership") {
    const auto space = line_space({Anchor{AnchorId("0"), {}}, Anchor{AnchorId("1"), {{3, {7.0}}}}});
    const auto c = space.make_point(AnchorId("0"), {{1, {1.0}}});
    const BoxNeighborhood box{c, {{1, 0.5}}};
    CHECK(space.box_contains(box, c));
    CHECK_FALSE(space.box_contains(box, space.make_point(AnchorId("0"), {{1, {1.5}}})));
    CHECK(space.box_contains(box, space.make_point(AnchorId("1"), {{1, {1.2}}})));
}

TEST_CASE("property: splice composes over disjoint index sets") {
    const auto space = mixed_space();
    Rng rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto a = random_point(space, AnchorId(i % 2 ? "a" : "b"), rng);
        const auto x = random_point(space, AnchorId(i % 3 ? "a" : "b"), rng);
        std::set<Index> s, s2;
        for (Index n = 1; n <= 7; ++n) {
            const auto r = uniform_index(rng, 0, 2);
            if (r == 1) s.insert(n);
            if (r == 2) s2.insert(n);
        }
        std::set<Index> both = s;
        both.insert(s2.begin(), s2.end());
        CHECK(space.splice(a, both, x) == space.splice(space.splice(a, s, x), s2, x));
    }
}

TEST_CASE("property: defect is symmetric and same_component is an equivalence") {
    const auto space = mixed_space();
    Rng rng(12);
    std::vector<SparsePoint> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(random_point(space, AnchorId(i % 3 ? "a" : "b"), rng));
    for (const auto& x : pts) {
        CHECK(space.defect(x, x) == Defect{0});
        for (const auto& y : pts) {
            CHECK(space.defect(x, y) == space.defect(y, x));
            for (const auto& z : pts)
                if (space.same_component(x, y) && space.same_component(y, z)) CHECK(space.same_component(x, z));
            const auto d = space.defect(x, y);
            if (d && *d > 0) CHECK(*d <= *space.defect(x, space.base_point(x.anchor)) + *space.defect(y, space.base_point(y.anchor)));
        }
    }
}

TEST_CASE("property: d_n depends on the first n coordinates and grows with n") {
    const auto space = mixed_space();
    Rng rng(13);
    for (int i = 0; i < 300; ++i) {
        const auto x = random_point(space, AnchorId("b"), rng);
        const auto y = random_point(space, AnchorId("b"), rng);
        const Index n = uniform_index(rng, 1, 6);
        std::set<Index> head;
        for (Index k = 1; k <= n; ++k) head.insert(k);
        const auto zero = space.base_point(AnchorId("a"));
        CHECK(space.dist_d_n(x, y, n) == space.dist_d_n(space.splice(zero, head, x), space.splice(zero, head, y), n));
        CHECK(space.dist_d_n(x, y, n) <= space.dist_d_n(x, y, n + 1));
    }
}

TEST_CASE("property: sphere distance agrees with the sampled oracle") {
    Rng rng(14);
    const double s = 0.05;
    for (int i = 0; i < 10000; ++i) {
        const CoordSpace cs{1 + static_cast<std::size_t>(i % 3), static_cast<NormKind>((i / 3) % 3)};
        CoordVector v(cs.dim);
        for (auto& c : v) c = uniform(rng, -3.0, 3.0);
        const double oracle = kernels::serial::sphere_distance(cs, v, s);
        CHECK(std::abs(dist_to_unit_sphere(cs, v) - oracle) <= 2.0 * kernels::sphere_sample_resolution(cs.dim, s));
    }
}

TEST_CASE("property: boxes are projectively symmetric about their centers") {
    const auto space = mixed_space();
    Rng rng(15);
    for (int i = 0; i < 200; ++i) {
        const auto c = random_point(space, AnchorId("a"), rng);
        BoxNeighborhood box{c, {{uniform_index(rng, 1, 5), 0.5}, {uniform_index(rng, 1, 5), 1.0}}};
        auto x = random_point(space, AnchorId("a"), rng);
        for (const auto& [n, r] : box.radii)
            x = space.with_coordinate(x, n, random_in_ball(space.family().at(n), space.coordinate(c, n), r, rng));
        REQUIRE(space.box_contains(box, x));
        for (Index t = 1; t <= 8; ++t) CHECK(space.box_contains(box, space.splice(x, {t}, c)));
    }
}
