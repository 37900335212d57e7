#include <doctest.h>

#include "ssc/core_space.hpp"
#include "ssc/random.hpp"
#include "ssc/s_topology.hpp"

using namespace ssc;

namespace {

SigmaSpace space2() {
    return SigmaSpace(SpaceFamily({}, {1, NormKind::L2}),
                      {Anchor{AnchorId("0"), {}}, Anchor{AnchorId("1"), {{2, {1.0}}}}});
}

std::vector<SparsePoint> sample(const SigmaSpace& space, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SparsePoint> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::map<Index, CoordVector> ov;
        for (int k = 0; k < 3; ++k) ov[uniform_index(rng, 1, 5)] = {uniform(rng, -0.9, 0.9)};
        out.push_back(space.make_point(AnchorId(i % 2 ? "0" : "1"), ov));
    }
    return out;
}

SetPredicate unit_ball_at_1(const SigmaSpace& space) {
    return {[&space](const SparsePoint& x) { return space.coordinate_norm(x, 1) < 1.0; }, SetTag::BlackBox, "ball"};
}

}  // namespace

TEST_CASE("S-open probe") {
    const auto space = space2();
    const auto pts = sample(space, 20, 1);
    MutationProbe probe{7};
    const auto comp = s_open_probe(space, component_union({AnchorId("0")}), pts, probe);
    CHECK(comp.passed());
    CHECK(comp.certainty == Certainty::Certified);
    const auto ball = s_open_probe(space, unit_ball_at_1(space), pts, probe);
    CHECK_FALSE(ball.passed());
    REQUIRE(ball.y.has_value());
    CHECK(space.coordinate_norm(*ball.y, 1) >= 1.0);
    CHECK(space.defect(*ball.x, *ball.y) == Defect{1});
    CHECK(s_open_probe(space, whole_space(), pts, probe).passed());
}

TEST_CASE("complement closure") {
    const auto space = space2();
    const auto pts = sample(space, 20, 2);
    MutationProbe probe{8};
    const auto comp = complement_closure_check(space, component_union({AnchorId("1")}), pts, probe);
    CHECK(comp.consistent);
    CHECK(comp.direct.passed());
    CHECK(comp.complement.passed());
    auto with_outside = pts;
    with_outside.push_back(space.make_point(AnchorId("0"), {{1, {2.0}}}));
    with_outside.push_back(space.make_point(AnchorId("1"), {{1, {-1.5}}, {3, {0.2}}}));
    const auto ball = complement_closure_check(space, unit_ball_at_1(space), with_outside, probe);
    CHECK_FALSE(ball.direct.passed());
    CHECK_FALSE(ball.complement.passed());
    CHECK(complement_closure_check(space, empty_set(), pts, probe).direct.passed());
}

TEST_CASE("component partition") {
    const auto space = space2();
    CHECK(component_partition(space, {}).empty());
    std::vector<SparsePoint> same(3, space.base_point(AnchorId("0")));
    CHECK(component_partition(space, same).size() == 1);
    std::vector<SparsePoint> mixed{space.base_point(AnchorId("0")), space.base_point(AnchorId("1")),
                                   space.make_point(AnchorId("0"), {{1, {2.0}}}), space.base_point(AnchorId("1")),
                                   space.make_point(AnchorId("0"), {{3, {2.0}}})};
    const auto groups = component_partition(space, mixed);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].size() == 3);
    CHECK(groups[1].size() == 2);
}

TEST_CASE("projective symmetry") {
    const auto space = space2();
    const auto a = space.base_point(AnchorId("0"));
    MutationProbe probe{9};
    const BoxNeighborhood box{a, {{1, 0.5}, {3, 0.2}}};
    SetPredicate in_box{[&](const SparsePoint& x) { return space.box_contains(box, x); }, SetTag::BlackBox, "box"};
    std::vector<SparsePoint> members{a, space.make_point(AnchorId("0"), {{1, {0.3}}, {3, {-0.1}}, {7, {9.0}}})};
    CHECK(projective_symmetry_check(space, in_box, a, members, probe).passed());

    SetPredicate sphere{[&](const SparsePoint& x) {
                            return space.coordinate_norm(x, 1) + space.coordinate_norm(x, 2) == 1.0;
                        },
                        SetTag::BlackBox, "l1 sphere"};
    const auto v = projective_symmetry_check(space, sphere, a, {space.make_point(AnchorId("0"), {{1, {1.0}}})}, probe);
    CHECK_FALSE(v.passed());
    CHECK(projective_symmetry_check(space, whole_space(), a, members, probe).passed());
}

TEST_CASE("coordinated limit") {
    const auto space = space2();
    const auto a = space.base_point(AnchorId("0"));
    MutationProbe probe{10};
    const std::vector<double> grid{1.0, 0.5, 0.3, 0.1, 0.01};
    const auto only_t = coordinated_limit_check(space, a, 1, BoxNeighborhood{a, {{1, 0.3}}}, grid, probe);
    CHECK(only_t.passed);
    CHECK(only_t.delta == 0.3);
    const auto other = coordinated_limit_check(space, a, 1, BoxNeighborhood{a, {{2, 0.3}}}, grid, probe);
    CHECK(other.passed);
    CHECK(other.vacuous);
    const auto both = coordinated_limit_check(space, a, 1, BoxNeighborhood{a, {{1, 0.3}, {2, 1.0}}}, grid, probe);
    CHECK(both.delta == 0.3);
}

TEST_CASE("property: density witnesses land in the box and the component") {
    const auto space = space2();
    Rng rng(3);
    const auto pts = sample(space, 100, 4);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& center = pts[(i * 7) % pts.size()];
        BoxNeighborhood box{center, {}};
        for (int k = 0; k < 3; ++k) box.radii[uniform_index(rng, 1, 6)] = uniform(rng, 1e-4, 1.0);
        const auto w = density_witness(space, pts[i], box);
        CHECK(space.box_contains(box, w));
        CHECK(space.same_component(w, pts[i]));
    }
}

TEST_CASE("property: component predicates pass both probes on arbitrary samples") {
    const auto space = space2();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto pts = sample(space, 15, 100 + seed);
        for (const auto& x : pts) {
            const auto set = component_union({x.anchor});
            const auto r = complement_closure_check(space, set, pts, MutationProbe{seed});
            CHECK(r.direct.passed());
            CHECK(r.complement.passed());
        }
    }
}
