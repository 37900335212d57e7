#include "ssc/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "ssc/error.hpp"

namespace ssc::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Blocks {
    std::vector<std::size_t> offset;  // first scalar axis of each coordinate
    std::vector<std::size_t> owner;   // coordinate owning each scalar axis
    std::size_t scalars = 0;

    explicit Blocks(std::span<const CoordSpace> spaces) {
        for (std::size_t i = 0; i < spaces.size(); ++i) {
            offset.push_back(scalars);
            for (std::size_t j = 0; j < spaces[i].dim; ++j) owner.push_back(i);
            scalars += spaces[i].dim;
        }
    }

    bool closes_block(std::span<const CoordSpace> spaces, std::size_t axis) const {
        const std::size_t i = owner[axis];
        return axis + 1 == offset[i] + spaces[i].dim;
    }
};

double block_distance(std::span<const CoordSpace> spaces, const Blocks& blocks, const DistanceTarget& target,
                      std::span<const double> y, std::size_t i) {
    const auto& s = spaces[i];
    auto yi = y.subspan(blocks.offset[i], s.dim);
    return std::max(0.0, norm(s, subtract(yi, target.centers[i])) - target.inflate[i]);
}

void check_target(std::span<const CoordSpace> spaces, const DistanceTarget& target) {
    if (target.centers.size() != spaces.size() || target.inflate.size() != spaces.size())
        throw Error(ErrorCode::DimensionMismatch, "distance target does not match the layout");
    for (std::size_t i = 0; i < spaces.size(); ++i)
        if (target.centers[i].size() != spaces[i].dim)
            throw Error(ErrorCode::DimensionMismatch, "distance target coordinate has wrong dimension");
}

/// Odometer over per-axis index ranges; calls visit(y) for every lattice point.
template <class Visit>
void enumerate(const std::vector<std::pair<long, long>>& ranges, const std::function<double(std::size_t, long)>& value,
               Visit&& visit) {
    const std::size_t D = ranges.size();
    for (const auto& r : ranges)
        if (r.first > r.second) return;
    std::vector<long> k(D);
    std::vector<double> y(D);
    for (std::size_t a = 0; a < D; ++a) {
        k[a] = ranges[a].first;
        y[a] = value(a, k[a]);
    }
    while (true) {
        visit(std::span<const double>(y));
        std::size_t a = D;
        while (a > 0) {
            --a;
            if (k[a] < ranges[a].second) {
                ++k[a];
                y[a] = value(a, k[a]);
                break;
            }
            k[a] = ranges[a].first;
            y[a] = value(a, k[a]);
            if (a == 0) return;
        }
        if (D == 0) return;
    }
}

struct PrunedSearch {
    std::span<const CoordSpace> spaces;
    const Blocks& blocks;
    const DistanceTarget& target;
    const FlatPredicate& predicate;
    const Grid& grid;
    const std::vector<std::pair<long, long>>& ranges;

    void descend(std::size_t axis, double partial, std::vector<double>& y, double& best) const {
        if (axis == blocks.scalars) {
            if (partial < best && predicate(y)) best = partial;
            return;
        }
        for (long k = ranges[axis].first; k <= ranges[axis].second; ++k) {
            y[axis] = grid.at(static_cast<std::size_t>(k));
            visit_axis(axis, partial, y, best);
        }
    }

    void visit_axis(std::size_t axis, double partial, std::vector<double>& y, double& best) const {
        double next = partial;
        if (blocks.closes_block(spaces, axis)) {
            next = std::max(partial, block_distance(spaces, blocks, target, y, blocks.owner[axis]));
            if (next >= best) return;
        }
        descend(axis + 1, next, y, best);
    }
};

std::vector<double> face_values(double resolution) {
    const auto m = static_cast<std::size_t>(std::ceil(2.0 / resolution)) + 1;
    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) out[k] = -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(m - 1);
    return out;
}

/// Distance from v to the projections of cube-surface points whose fixed
/// axis is `axis` (value ±1) and whose second free axis index is `outer`.
double sphere_face_slice(const CoordSpace& space, std::span<const double> v, const std::vector<double>& vals,
                         std::size_t face, std::size_t outer) {
    const std::size_t d = space.dim;
    const std::size_t axis = face / 2;
    const double sign = face % 2 == 0 ? 1.0 : -1.0;
    std::vector<std::size_t> free_axes;
    for (std::size_t a = 0; a < d; ++a)
        if (a != axis) free_axes.push_back(a);
    std::vector<std::pair<long, long>> ranges(free_axes.size(), {0, static_cast<long>(vals.size()) - 1});
    ranges[0] = {static_cast<long>(outer), static_cast<long>(outer)};
    double best = kInf;
    std::vector<double> p(d), diff(d);
    enumerate(ranges, [&](std::size_t, long k) { return vals[static_cast<std::size_t>(k)]; },
              [&](std::span<const double> y) {
                  p[axis] = sign;
                  for (std::size_t j = 0; j < free_axes.size(); ++j) p[free_axes[j]] = y[j];
                  const double n = norm(space.norm, p);
                  for (std::size_t a = 0; a < d; ++a) diff[a] = v[a] - p[a] / n;
                  best = std::min(best, norm(space.norm, diff));
              });
    return best;
}

double sphere_distance_1d(std::span<const double> v) { return std::min(std::abs(v[0] - 1.0), std::abs(v[0] + 1.0)); }

std::vector<std::pair<long, long>> oscillation_ranges(std::span<const double> half_widths, double step) {
    std::vector<std::pair<long, long>> out;
    for (double h : half_widths) {
        const long K = static_cast<long>(std::floor(h / step + 1e-9));
        out.emplace_back(-K, K);
    }
    return out;
}

/// Exceptions must not escape an OpenMP region; the first one is kept and
/// rethrown after the loop.
class ExceptionSlot {
public:
    template <class F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
#pragma omp critical(ssc_exception_slot)
            if (!ptr_) ptr_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (ptr_) std::rethrow_exception(ptr_);
    }

private:
    std::exception_ptr ptr_;
};

}  // namespace

std::size_t Grid::count() const {
    if (!(step > 0.0) || !(hi >= lo)) throw Error(ErrorCode::InvalidArgument, "grid needs step > 0 and hi >= lo");
    return static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
}

DistanceTarget DistanceTarget::point(FinitePoint u) {
    DistanceTarget t;
    t.inflate.assign(u.size(), 0.0);
    t.centers = std::move(u);
    return t;
}

double DistanceTarget::distance(std::span<const CoordSpace> spaces, std::span<const double> flat_y) const {
    Blocks blocks(spaces);
    double d = 0.0;
    for (std::size_t i = 0; i < spaces.size(); ++i) d = std::max(d, block_distance(spaces, blocks, *this, flat_y, i));
    return d;
}

double sphere_sample_resolution(std::size_t dim, double resolution) { return static_cast<double>(dim) * resolution; }

namespace serial {

std::optional<double> grid_min_distance(std::span<const CoordSpace> spaces, const DistanceTarget& target,
                                        const FlatPredicate& predicate, const Grid& grid) {
    check_target(spaces, target);
    Blocks blocks(spaces);
    const long K = static_cast<long>(grid.count()) - 1;
    std::vector<std::pair<long, long>> ranges(blocks.scalars, {0, K});
    double best = kInf;
    enumerate(ranges, [&](std::size_t, long k) { return grid.at(static_cast<std::size_t>(k)); },
              [&](std::span<const double> y) {
                  if (predicate(y)) best = std::min(best, target.distance(spaces, y));
              });
    if (best == kInf) return std::nullopt;
    return best;
}

double grid_oscillation(std::span<const CoordSpace> spaces, const FlatFunction& f, std::span<const double> center,
                        std::span<const double> half_widths, double step) {
    Blocks blocks(spaces);
    if (center.size() != blocks.scalars || half_widths.size() != blocks.scalars)
        throw Error(ErrorCode::DimensionMismatch, "oscillation center size");
    double lo = kInf, hi = -kInf;
    enumerate(oscillation_ranges(half_widths, step),
              [&](std::size_t a, long k) { return center[a] + static_cast<double>(k) * step; },
              [&](std::span<const double> y) {
                  const double v = f(y);
                  lo = std::min(lo, v);
                  hi = std::max(hi, v);
              });
    return hi - lo;
}

double sphere_distance(const CoordSpace& space, std::span<const double> v, double resolution) {
    if (v.size() != space.dim) throw Error(ErrorCode::DimensionMismatch, "sphere_distance dimension");
    if (space.dim == 1) return sphere_distance_1d(v);
    const auto vals = face_values(resolution);
    double best = kInf;
    for (std::size_t face = 0; face < 2 * space.dim; ++face)
        for (std::size_t outer = 0; outer < vals.size(); ++outer)
            best = std::min(best, sphere_face_slice(space, v, vals, face, outer));
    return best;
}

double sampled_sup(std::size_t count, const std::function<double(std::size_t)>& term) {
    double best = 0.0;
    for (std::size_t i = 0; i < count; ++i) best = std::max(best, term(i));
    return best;
}

std::vector<double> evaluate_batch(std::size_t count, const std::function<double(std::size_t)>& term) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = term(i);
    return out;
}

}  // namespace serial

namespace parallel {

std::optional<double> grid_min_distance(std::span<const CoordSpace> spaces, const DistanceTarget& target,
                                        const FlatPredicate& predicate, const Grid& grid) {
    check_target(spaces, target);
    Blocks blocks(spaces);
    const long K = static_cast<long>(grid.count()) - 1;
    if (blocks.scalars == 0) return predicate({}) ? std::optional<double>(0.0) : std::nullopt;

    std::vector<double> flat_center;
    std::vector<double> axis_inflate;
    for (std::size_t i = 0; i < spaces.size(); ++i)
        for (std::size_t j = 0; j < spaces[i].dim; ++j) {
            flat_center.push_back(target.centers[i][j]);
            axis_inflate.push_back(target.inflate[i]);
        }

    for (double R = 4.0 * grid.step;; R *= 2.0) {
        // every grid point within distance R of the target lies in this box
        std::vector<std::pair<long, long>> ranges(blocks.scalars);
        bool covers_grid = true;
        bool empty = false;
        for (std::size_t a = 0; a < blocks.scalars; ++a) {
            const double lo = flat_center[a] - axis_inflate[a] - R;
            const double hi = flat_center[a] + axis_inflate[a] + R;
            long klo = static_cast<long>(std::ceil((lo - grid.lo) / grid.step - 1e-9));
            long khi = static_cast<long>(std::floor((hi - grid.lo) / grid.step + 1e-9));
            covers_grid = covers_grid && klo <= 0 && khi >= K;
            klo = std::max(klo, 0L);
            khi = std::min(khi, K);
            if (klo > khi) empty = true;
            ranges[a] = {klo, khi};
        }
        double best = kInf;
        ExceptionSlot slot;
        if (!empty) {
            PrunedSearch search{spaces, blocks, target, predicate, grid, ranges};
            const long first = ranges[0].first, last = ranges[0].second;
#pragma omp parallel for schedule(dynamic) reduction(min : best)
            for (long k = first; k <= last; ++k) {
                slot.run([&] {
                    std::vector<double> y(blocks.scalars);
                    y[0] = grid.at(static_cast<std::size_t>(k));
                    double local = kInf;
                    search.visit_axis(0, 0.0, y, local);
                    best = std::min(best, local);
                });
            }
            slot.rethrow();
        }
        if (best <= R) return best;
        if (covers_grid) return best == kInf ? std::nullopt : std::optional<double>(best);
    }
}

double grid_oscillation(std::span<const CoordSpace> spaces, const FlatFunction& f, std::span<const double> center,
                        std::span<const double> half_widths, double step) {
    Blocks blocks(spaces);
    if (center.size() != blocks.scalars || half_widths.size() != blocks.scalars)
        throw Error(ErrorCode::DimensionMismatch, "oscillation center size");
    if (blocks.scalars == 0) return 0.0;
    auto ranges = oscillation_ranges(half_widths, step);
    const long first = ranges[0].first, last = ranges[0].second;
    double lo = kInf, hi = -kInf;
    ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic) reduction(min : lo) reduction(max : hi)
    for (long k0 = first; k0 <= last; ++k0) {
        slot.run([&] {
            auto local = ranges;
            local[0] = {k0, k0};
            enumerate(local, [&](std::size_t a, long k) { return center[a] + static_cast<double>(k) * step; },
                      [&](std::span<const double> y) {
                          const double v = f(y);
                          lo = std::min(lo, v);
                          hi = std::max(hi, v);
                      });
        });
    }
    slot.rethrow();
    return hi - lo;
}

double sphere_distance(const CoordSpace& space, std::span<const double> v, double resolution) {
    if (v.size() != space.dim) throw Error(ErrorCode::DimensionMismatch, "sphere_distance dimension");
    if (space.dim == 1) return sphere_distance_1d(v);
    const auto vals = face_values(resolution);
    const long faces = static_cast<long>(2 * space.dim);
    const long outer = static_cast<long>(vals.size());
    double best = kInf;
#pragma omp parallel for schedule(static) reduction(min : best)
    for (long job = 0; job < faces * outer; ++job)
        best = std::min(best, sphere_face_slice(space, v, vals, static_cast<std::size_t>(job / outer),
                                                static_cast<std::size_t>(job % outer)));
    return best;
}

double sampled_sup(std::size_t count, const std::function<double(std::size_t)>& term) {
    double best = 0.0;
    const long n = static_cast<long>(count);
    ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 256) reduction(max : best)
    for (long i = 0; i < n; ++i) slot.run([&] { best = std::max(best, term(static_cast<std::size_t>(i))); });
    slot.rethrow();
    return best;
}

std::vector<double> evaluate_batch(std::size_t count, const std::function<double(std::size_t)>& term) {
    std::vector<double> out(count);
    const long n = static_cast<long>(count);
    ExceptionSlot slot;
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i) slot.run([&] { out[static_cast<std::size_t>(i)] = term(static_cast<std::size_t>(i)); });
    slot.rethrow();
    return out;
}

}  // namespace parallel

}  // namespace ssc::kernels
