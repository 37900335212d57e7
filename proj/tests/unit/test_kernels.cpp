#include <doctest.h>

#include <cmath>

#include "ssc/error.hpp"
#include "ssc/kernels.hpp"
#include "ssc/random.hpp"

using namespace ssc;
using namespace ssc::kernels;

TEST_CASE("grid minimum distance: serial and parallel agree") {
    Rng rng(31);
    const std::vector<CoordSpace> spaces{{1, NormKind::L2}, {2, NormKind::L1}};
    const Grid grid{-2.0, 2.0, 0.1};
    for (int i = 0; i < 20; ++i) {
        FinitePoint u{{uniform(rng, -2, 2)}, {uniform(rng, -2, 2), uniform(rng, -2, 2)}};
        const double r = uniform(rng, 0.2, 1.5);
        const auto target = i % 2 ? DistanceTarget::point(u) : DistanceTarget{u, {0.1, 0.2}};
        const FlatPredicate outside = [r](std::span<const double> y) {
            return std::abs(y[0]) >= r || std::abs(y[1]) + std::abs(y[2]) >= r;
        };
        const auto a = serial::grid_min_distance(spaces, target, outside, grid);
        const auto b = parallel::grid_min_distance(spaces, target, outside, grid);
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(*a == doctest::Approx(*b).epsilon(1e-12));
    }
    const FlatPredicate never = [](std::span<const double>) { return false; };
    CHECK_FALSE(serial::grid_min_distance(spaces, DistanceTarget::point({{0.0}, {0.0, 0.0}}), never, grid));
    CHECK_FALSE(parallel::grid_min_distance(spaces, DistanceTarget::point({{0.0}, {0.0, 0.0}}), never, grid));
}

TEST_CASE("grid oscillation: serial and parallel agree") {
    const std::vector<CoordSpace> spaces{{1, NormKind::L2}, {1, NormKind::L2}};
    const FlatFunction f = [](std::span<const double> y) { return std::sin(3 * y[0]) * y[1]; };
    const std::vector<double> c{0.2, -0.4}, hw{0.5, 0.25};
    CHECK(serial::grid_oscillation(spaces, f, c, hw, 0.01) == parallel::grid_oscillation(spaces, f, c, hw, 0.01));
    const FlatFunction step = [](std::span<const double> y) { return std::abs(y[0]) >= 1.0 ? 1.0 : 0.0; };
    CHECK(serial::grid_oscillation(spaces, step, std::vector<double>{1.0, 0.0}, std::vector<double>{0.1, 0.0}, 0.01) ==
          1.0);
}

TEST_CASE("sphere distance: serial and parallel agree") {
    Rng rng(32);
    for (int i = 0; i < 50; ++i) {
        const CoordSpace cs{1 + static_cast<std::size_t>(i % 3), static_cast<NormKind>(i % 3)};
        CoordVector v(cs.dim);
        for (auto& x : v) x = uniform(rng, -2, 2);
        CHECK(serial::sphere_distance(cs, v, 0.05) == parallel::sphere_distance(cs, v, 0.05));
    }
}

TEST_CASE("sampled sup and batch evaluation: serial and parallel agree") {
    auto term = [](std::size_t i) { return std::cos(static_cast<double>(i) * 0.37); };
    CHECK(serial::sampled_sup(1000, term) == parallel::sampled_sup(1000, term));
    CHECK(serial::sampled_sup(0, term) == 0.0);
    CHECK(parallel::sampled_sup(0, term) == 0.0);
    CHECK(serial::evaluate_batch(777, term) == parallel::evaluate_batch(777, term));
}

TEST_CASE("parallel kernels rethrow errors from worker iterations") {
    auto bad = [](std::size_t i) -> double {
        if (i == 57) throw Error(ErrorCode::Precondition, "boom");
        return 0.0;
    };
    CHECK_THROWS_WITH_AS(parallel::sampled_sup(100, bad), doctest::Contains("boom"), Error);
    CHECK_THROWS_WITH_AS(parallel::evaluate_batch(100, bad), doctest::Contains("boom"), Error);
}
