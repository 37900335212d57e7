#include <benchmark/benchmark.h>

#include <cmath>

#include "ssc/kernels.hpp"

using namespace ssc;
using namespace ssc::kernels;

namespace {

const std::vector<CoordSpace> kSpaces{{1, NormKind::L2}, {1, NormKind::L2}};
const Grid kGrid{-3.0, 3.0, 0.01};
const FlatPredicate kOutsideA2 = [](std::span<const double> y) { return std::abs(y[0]) >= 1.0 || std::abs(y[1]) < 1.0; };
const DistanceTarget kTarget = DistanceTarget::point({{0.5}, {2.0}});

template <auto Kernel>
void grid_min_distance(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(kSpaces, kTarget, kOutsideA2, kGrid));
}

template <auto Kernel>
void grid_oscillation(benchmark::State& state) {
    const FlatFunction f = [](std::span<const double> y) { return std::sin(3 * y[0]) * y[1]; };
    const std::vector<double> c{0.0, 0.0}, hw{1.0, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(kSpaces, f, c, hw, 0.005));
}

template <auto Kernel>
void sphere_distance(benchmark::State& state) {
    const CoordSpace cs{3, NormKind::L2};
    const std::vector<double> v{0.3, 1.2, -0.7};
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(cs, v, 0.01));
}

template <auto Kernel>
void sampled_sup(benchmark::State& state) {
    auto term = [](std::size_t i) { return std::cos(static_cast<double>(i) * 1e-3); };
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(1 << 20, term));
}

}  // namespace

BENCHMARK(grid_min_distance<serial::grid_min_distance>)->Name("grid_min_distance/serial");
BENCHMARK(grid_min_distance<parallel::grid_min_distance>)->Name("grid_min_distance/parallel");
BENCHMARK(grid_oscillation<serial::grid_oscillation>)->Name("grid_oscillation/serial");
BENCHMARK(grid_oscillation<parallel::grid_oscillation>)->Name("grid_oscillation/parallel");
BENCHMARK(sphere_distance<serial::sphere_distance>)->Name("sphere_distance/serial");
BENCHMARK(sphere_distance<parallel::sphere_distance>)->Name("sphere_distance/parallel");
BENCHMARK(sampled_sup<serial::sampled_sup>)->Name("sampled_sup/serial");
BENCHMARK(sampled_sup<parallel::sampled_sup>)->Name("sampled_sup/parallel");

BENCHMARK_MAIN();
