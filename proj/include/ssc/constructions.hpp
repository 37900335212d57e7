#pragma once

// Explicit strongly separately continuous functions on σ(a):
//
//  * the ball-product function, whose discontinuity set is exactly
//    W = (∏ B(w_n, r_n)) ∩ σ(a) and which vanishes on W;
//  * weighted unions Σ 2^{-m} f_m over finitely many ball products;
//  * the component indicator, continuous in the S-topology but discontinuous
//    everywhere in the Tychonoff topology;
//  * closure under +, −, ·, |·|, min, max and weighted series.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ssc/core_space.hpp"
#include "ssc/s_topology.hpp"
#include "ssc/traces.hpp"

namespace ssc {

/// Positive radii r_1, r_2, ...: explicit prefix, then a constant tail.
struct Radii {
    std::vector<double> prefix;
    double tail = 1.0;

    double at(Index n) const { return n <= prefix.size() ? prefix[n - 1] : tail; }
    bool operator==(const Radii&) const = default;
};

struct BallProduct {
    AnchorId anchor;
    SparsePoint center;
    Radii radii;
};

struct NearlyOpenUnion {
    std::vector<BallProduct> balls;
};

/// Finitely supported sequence over the zero anchor; image of the h map.
using ZeroSequence = std::map<Index, CoordVector>;

struct RegionTag {
    bool inside = true;
    Index escape = 0;  // least n with ‖z_n‖ >= 1 when !inside

    static RegionTag in() { return {}; }
    static RegionTag escape_at(Index n) { return {false, n}; }
    bool operator==(const RegionTag&) const = default;
};

void validate(const SigmaSpace& space, const BallProduct& ball);

/// h(x)_n = (x_n − w_n) / r_n.
ZeroSequence h_transform(const SigmaSpace& space, const SparsePoint& x, const BallProduct& ball);
SparsePoint h_inverse(const SigmaSpace& space, const ZeroSequence& z, const BallProduct& ball);

RegionTag classify_region(const SigmaSpace& space, const ZeroSequence& z);

/// ESCAPE(n) -> min_{i<=n} |‖z_i‖ − 1|, inside -> 0.
double evaluate_g(const SigmaSpace& space, const ZeroSequence& z);

bool ball_product_contains(const SigmaSpace& space, const BallProduct& ball, const SparsePoint& x);

/// Traces of a union of ball products over their anchor's base point.
TraceFamily ball_product_traces(const SigmaSpace& space, std::vector<BallProduct> balls);

enum class FunctionKind {
    BallProduct,
    WeightedUnion,
    ComponentIndicator,
    Algebra,
    Series,
    Constant,
    CoordinateNorm,
    Custom,
};

enum class AlgebraOp { Add, Sub, Mul, Abs, Min, Max };

std::string_view to_string(FunctionKind kind) noexcept;
std::string_view to_string(AlgebraOp op) noexcept;

class ConstructedFunction;

struct BallProductParams {
    BallProduct ball;
};
struct WeightedUnionParams {
    NearlyOpenUnion uni;
    std::vector<ConstructedFunction> children;
};
struct IndicatorParams {
    SparsePoint reference;
    double inside = 0.0;
    double outside = 1.0;
};
struct AlgebraParams {
    AlgebraOp op = AlgebraOp::Add;
    std::vector<ConstructedFunction> args;
};
struct SeriesParams {
    std::vector<double> weights;
    std::vector<ConstructedFunction> terms;
    double tail_bound = 0.0;  // declared sup-norm bound of the omitted tail
};
struct ConstantParams {
    double value = 0.0;
};
struct CoordinateNormParams {
    Index index = 1;
};
struct CustomParams {
    std::string name;
    std::function<double(const SigmaSpace&, const SparsePoint&)> fn;
};

/// Immutable evaluable function plus what it claims about its
/// discontinuity set. Cheap to copy.
class ConstructedFunction {
public:
    using Params = std::variant<BallProductParams, WeightedUnionParams, IndicatorParams, AlgebraParams,
                                SeriesParams, ConstantParams, CoordinateNormParams, CustomParams>;

    ConstructedFunction(Params params, std::optional<AnchorId> anchor, std::optional<SetPredicate> claimed);

    FunctionKind kind() const noexcept;
    const Params& params() const noexcept { return node_->params; }
    template <class T>
    const T& as() const {
        return std::get<T>(node_->params);
    }

    /// Anchor of σ(a) the function is defined on; nullopt when every
    /// anchor is accepted.
    const std::optional<AnchorId>& anchor() const noexcept { return node_->anchor; }
    /// Claimed discontinuity set, when the construction knows it.
    const std::optional<SetPredicate>& claimed_discontinuities() const noexcept { return node_->claimed; }

    std::string describe() const;

private:
    struct Node {
        Params params;
        std::optional<AnchorId> anchor;
        std::optional<SetPredicate> claimed;
    };
    std::shared_ptr<const Node> node_;
};

ConstructedFunction build_ball_product_function(const SigmaSpace& space, const BallProduct& ball);
ConstructedFunction build_union_function(const SigmaSpace& space, const NearlyOpenUnion& uni);
ConstructedFunction component_indicator(const SigmaSpace& space, SparsePoint reference, double inside,
                                        double outside);
ConstructedFunction algebra(AlgebraOp op, std::vector<ConstructedFunction> args);
ConstructedFunction series(std::vector<double> weights, std::vector<ConstructedFunction> terms,
                           double tail_bound);
ConstructedFunction constant(double value);
ConstructedFunction coordinate_norm(Index index);
ConstructedFunction custom(std::string name, std::function<double(const SigmaSpace&, const SparsePoint&)> fn,
                           std::optional<AnchorId> anchor = std::nullopt);

double evaluate(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& x);

/// Ball products that make up f's claimed discontinuity set (empty when f is
/// not built from them).
std::vector<BallProduct> ball_products_of(const ConstructedFunction& f);

struct RadiiExtension {
    std::vector<double> radii;    // r_1..r_M
    std::vector<double> margins;  // margin used at each stage (first entry covers r_1..r_N)
    Index support = 1;            // N
};

/// Radii r_1..r_M with ∏_{k<=j} B[x_k, r_k] ⊆ G_j for every N <= j <= M.
/// The first N radii are half the margin of x's trace point in G_N; after
/// that r_j = min(margin_j, r_{j-1}) / 2. Throws NotNearlyOpen when a
/// margin is not positive.
RadiiExtension radii_extension(const SigmaSpace& space, const TraceFamily& traces, const SparsePoint& x,
                               Index horizon);

}  // namespace ssc
