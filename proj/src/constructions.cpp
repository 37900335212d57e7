#include "ssc/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ssc/error.hpp"

namespace ssc {

namespace {

void require_anchor(const AnchorId& expected, const SparsePoint& x) {
    if (x.anchor != expected)
        throw Error(ErrorCode::AnchorMismatch,
                    "point over '" + x.anchor.str() + "' given to a function on σ('" + expected.str() + "')");
}

std::optional<AnchorId> merge_anchors(const std::vector<ConstructedFunction>& fs) {
    std::optional<AnchorId> out;
    for (const auto& f : fs) {
        if (!f.anchor()) continue;
        if (out && *out != *f.anchor())
            throw Error(ErrorCode::AnchorMismatch, "operands live on different sigma-products");
        out = f.anchor();
    }
    return out;
}

}  // namespace

void validate(const SigmaSpace& space, const BallProduct& ball) {
    space.anchor(ball.anchor);
    require_anchor(ball.anchor, ball.center);
    for (const auto& [n, v] : ball.center.overrides) space.check_dim(n, v);
    auto positive = [](double r) { return std::isfinite(r) && r > 0.0; };
    if (!positive(ball.radii.tail) || !std::all_of(ball.radii.prefix.begin(), ball.radii.prefix.end(), positive))
        throw Error(ErrorCode::RadiusNonpositive, "ball-product radii must be positive and finite");
}

ZeroSequence h_transform(const SigmaSpace& space, const SparsePoint& x, const BallProduct& ball) {
    require_anchor(ball.anchor, x);
    std::set<Index> indices;
    for (const auto& kv : x.overrides) indices.insert(kv.first);
    for (const auto& kv : ball.center.overrides) indices.insert(kv.first);
    ZeroSequence z;
    for (Index n : indices) {
        auto v = subtract(space.coordinate(x, n), space.coordinate(ball.center, n));
        const double r = ball.radii.at(n);
        bool nonzero = false;
        for (auto& e : v) {
            e /= r;
            nonzero = nonzero || e != 0.0;
        }
        if (nonzero) z.emplace(n, std::move(v));
    }
    return z;
}

SparsePoint h_inverse(const SigmaSpace& space, const ZeroSequence& z, const BallProduct& ball) {
    std::map<Index, CoordVector> overrides = ball.center.overrides;
    for (const auto& [n, v] : z) {
        space.check_dim(n, v);
        auto w = space.coordinate(ball.center, n);
        const double r = ball.radii.at(n);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += r * v[i];
        overrides[n] = std::move(w);
    }
    return space.make_point(ball.anchor, std::move(overrides));
}

RegionTag classify_region(const SigmaSpace& space, const ZeroSequence& z) {
    for (const auto& [n, v] : z)
        if (space.norm_at(n, v) >= 1.0) return RegionTag::escape_at(n);
    return RegionTag::in();
}

double evaluate_g(const SigmaSpace& space, const ZeroSequence& z) {
    const RegionTag region = classify_region(space, z);
    if (region.inside) return 0.0;
    double rho = std::numeric_limits<double>::infinity();
    std::size_t listed = 0;
    for (const auto& [i, v] : z) {
        if (i > region.escape) break;
        ++listed;
        rho = std::min(rho, dist_to_unit_sphere(space.family().at(i), v));
    }
    // unlisted coordinates are 0, at distance 1 from the sphere
    if (listed < region.escape) rho = std::min(rho, 1.0);
    return rho;
}

bool ball_product_contains(const SigmaSpace& space, const BallProduct& ball, const SparsePoint& x) {
    return x.anchor == ball.anchor && classify_region(space, h_transform(space, x, ball)).inside;
}

TraceFamily ball_product_traces(const SigmaSpace& space, std::vector<BallProduct> balls) {
    return {[space, balls = std::move(balls)](Index n) {
        TraceSet set;
        for (const auto& b : balls) {
            // coordinates past n stay at the anchor and must already lie in the ball
            bool tail_ok = true;
            for (const auto& [i, w] : b.center.overrides) {
                if (i <= n) continue;
                auto a_i = space.coordinate(space.base_point(b.anchor), i);
                if (!(space.norm_at(i, subtract(a_i, w)) < b.radii.at(i))) tail_ok = false;
            }
            if (!tail_ok) continue;
            TraceComponent c;
            c.kind = ComponentKind::OpenBallProduct;
            for (Index i = 1; i <= n; ++i) {
                c.centers.push_back(space.coordinate(b.center, i));
                c.radii.push_back(b.radii.at(i));
            }
            set.components.push_back(std::move(c));
        }
        return set;
    }};
}

std::string_view to_string(FunctionKind kind) noexcept {
    switch (kind) {
    case FunctionKind::BallProduct: return "ball_product";
    case FunctionKind::WeightedUnion: return "union";
    case FunctionKind::ComponentIndicator: return "indicator";
    case FunctionKind::Algebra: return "algebra";
    case FunctionKind::Series: return "series";
    case FunctionKind::Constant: return "constant";
    case FunctionKind::CoordinateNorm: return "coord_norm";
    case FunctionKind::Custom: return "custom";
    }
    return "unknown";
}

std::string_view to_string(AlgebraOp op) noexcept {
    switch (op) {
    case AlgebraOp::Add: return "add";
    case AlgebraOp::Sub: return "sub";
    case AlgebraOp::Mul: return "mul";
    case AlgebraOp::Abs: return "abs";
    case AlgebraOp::Min: return "min";
    case AlgebraOp::Max: return "max";
    }
    return "unknown";
}

ConstructedFunction::ConstructedFunction(Params params, std::optional<AnchorId> anchor,
                                         std::optional<SetPredicate> claimed)
    : node_(std::make_shared<const Node>(Node{std::move(params), std::move(anchor), std::move(claimed)})) {}

FunctionKind ConstructedFunction::kind() const noexcept {
    return static_cast<FunctionKind>(node_->params.index());
}

std::string ConstructedFunction::describe() const {
    std::ostringstream os;
    os << to_string(kind());
    if (const auto* a = std::get_if<AlgebraParams>(&node_->params)) {
        os << "." << to_string(a->op) << "(";
        for (std::size_t i = 0; i < a->args.size(); ++i) os << (i ? "," : "") << a->args[i].describe();
        os << ")";
    } else if (const auto* u = std::get_if<WeightedUnionParams>(&node_->params)) {
        os << "[M=" << u->children.size() << "]";
    } else if (const auto* c = std::get_if<CoordinateNormParams>(&node_->params)) {
        os << "[" << c->index << "]";
    } else if (const auto* k = std::get_if<CustomParams>(&node_->params)) {
        os << "[" << k->name << "]";
    }
    if (node_->anchor) os << "@" << node_->anchor->str();
    return os.str();
}

ConstructedFunction build_ball_product_function(const SigmaSpace& space, const BallProduct& ball) {
    validate(space, ball);
    SetPredicate claimed{[space, ball](const SparsePoint& x) { return ball_product_contains(space, ball, x); },
                         SetTag::BallProductUnion, "ball product"};
    return ConstructedFunction(BallProductParams{ball}, ball.anchor, std::move(claimed));
}

ConstructedFunction build_union_function(const SigmaSpace& space, const NearlyOpenUnion& uni) {
    if (uni.balls.empty()) throw Error(ErrorCode::EmptyUnion, "a weighted union needs at least one ball product");
    const AnchorId anchor = uni.balls.front().anchor;
    WeightedUnionParams params{uni, {}};
    for (const auto& b : uni.balls) {
        if (b.anchor != anchor) throw Error(ErrorCode::AnchorMismatch, "union members must share one anchor");
        params.children.push_back(build_ball_product_function(space, b));
    }
    SetPredicate claimed{[space, uni](const SparsePoint& x) {
                             return std::any_of(uni.balls.begin(), uni.balls.end(), [&](const BallProduct& b) {
                                 return ball_product_contains(space, b, x);
                             });
                         },
                         SetTag::BallProductUnion, "union of " + std::to_string(uni.balls.size()) + " ball products"};
    return ConstructedFunction(std::move(params), anchor, std::move(claimed));
}

ConstructedFunction component_indicator(const SigmaSpace& space, SparsePoint reference, double inside,
                                        double outside) {
    space.anchor(reference.anchor);
    // discontinuous at every point of the Tychonoff product
    return ConstructedFunction(IndicatorParams{std::move(reference), inside, outside}, std::nullopt, whole_space());
}

ConstructedFunction algebra(AlgebraOp op, std::vector<ConstructedFunction> args) {
    const std::size_t arity = op == AlgebraOp::Abs ? 1 : 2;
    if (args.size() != arity)
        throw Error(ErrorCode::InvalidArgument, std::string(to_string(op)) + " takes " + std::to_string(arity) +
                                                    " operand(s), got " + std::to_string(args.size()));
    auto anchor = merge_anchors(args);
    return ConstructedFunction(AlgebraParams{op, std::move(args)}, std::move(anchor), std::nullopt);
}

ConstructedFunction series(std::vector<double> weights, std::vector<ConstructedFunction> terms, double tail_bound) {
    if (weights.size() != terms.size())
        throw Error(ErrorCode::InvalidArgument, "series needs one weight per term");
    if (!(tail_bound >= 0.0)) throw Error(ErrorCode::InvalidArgument, "series tail bound must be >= 0");
    auto anchor = merge_anchors(terms);
    return ConstructedFunction(SeriesParams{std::move(weights), std::move(terms), tail_bound}, std::move(anchor),
                               std::nullopt);
}

ConstructedFunction constant(double value) {
    return ConstructedFunction(ConstantParams{value}, std::nullopt, empty_set());
}

ConstructedFunction coordinate_norm(Index index) {
    if (index == 0) throw Error(ErrorCode::InvalidArgument, "coordinate indices start at 1");
    return ConstructedFunction(CoordinateNormParams{index}, std::nullopt, empty_set());
}

ConstructedFunction custom(std::string name, std::function<double(const SigmaSpace&, const SparsePoint&)> fn,
                           std::optional<AnchorId> anchor) {
    return ConstructedFunction(CustomParams{std::move(name), std::move(fn)}, std::move(anchor), std::nullopt);
}

double evaluate(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& x) {
    if (f.anchor()) require_anchor(*f.anchor(), x);
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, BallProductParams>) {
                return std::min(evaluate_g(space, h_transform(space, x, p.ball)), 1.0);
            } else if constexpr (std::is_same_v<P, WeightedUnionParams>) {
                double sum = 0.0;
                double w = 0.5;
                for (const auto& c : p.children) {
                    sum += w * evaluate(space, c, x);
                    w *= 0.5;
                }
                return sum;
            } else if constexpr (std::is_same_v<P, IndicatorParams>) {
                return space.same_component(x, p.reference) ? p.inside : p.outside;
            } else if constexpr (std::is_same_v<P, AlgebraParams>) {
                const double a = evaluate(space, p.args[0], x);
                if (p.op == AlgebraOp::Abs) return std::abs(a);
                const double b = evaluate(space, p.args[1], x);
                switch (p.op) {
                case AlgebraOp::Add: return a + b;
                case AlgebraOp::Sub: return a - b;
                case AlgebraOp::Mul: return a * b;
                case AlgebraOp::Min: return std::min(a, b);
                case AlgebraOp::Max: return std::max(a, b);
                case AlgebraOp::Abs: break;
                }
                return a;
            } else if constexpr (std::is_same_v<P, SeriesParams>) {
                double sum = 0.0;
                for (std::size_t k = 0; k < p.terms.size(); ++k) sum += p.weights[k] * evaluate(space, p.terms[k], x);
                return sum;
            } else if constexpr (std::is_same_v<P, ConstantParams>) {
                return p.value;
            } else if constexpr (std::is_same_v<P, CoordinateNormParams>) {
                return space.coordinate_norm(x, p.index);
            } else {
                return p.fn(space, x);
            }
        },
        f.params());
}

std::vector<BallProduct> ball_products_of(const ConstructedFunction& f) {
    if (f.kind() == FunctionKind::BallProduct) return {f.as<BallProductParams>().ball};
    if (f.kind() == FunctionKind::WeightedUnion) return f.as<WeightedUnionParams>().uni.balls;
    return {};
}

RadiiExtension radii_extension(const SigmaSpace& space, const TraceFamily& traces, const SparsePoint& x,
                               Index horizon) {
    RadiiExtension out;
    out.support = x.overrides.empty() ? 1 : std::max<Index>(1, x.overrides.rbegin()->first);
    const Index N = out.support;
    if (horizon < N) throw Error(ErrorCode::InvalidArgument, "horizon must reach the support of x");

    auto spaces = layout(space.family(), horizon);
    FinitePoint centers;
    for (Index i = 1; i <= horizon; ++i) centers.push_back(space.coordinate(x, i));

    auto margin_at = [&](Index n, const std::vector<double>& inflate) {
        auto set = traces.at(n);
        FinitePoint c(centers.begin(), centers.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<double> infl(inflate);
        infl.resize(n, 0.0);
        return analytic_margin(std::span(spaces).first(n), set, c, infl);
    };

    const double m0 = margin_at(N, {});
    if (!(m0 > 0.0))
        throw Error(ErrorCode::NotNearlyOpen, "trace point of x has no positive margin in G_" + std::to_string(N));
    out.margins.push_back(m0);
    out.radii.assign(N, m0 / 2.0);
    for (Index j = N + 1; j <= horizon; ++j) {
        const double m = margin_at(j, out.radii);
        if (!(m > 0.0))
            throw Error(ErrorCode::NotNearlyOpen, "closed product leaves G_" + std::to_string(j));
        out.margins.push_back(m);
        out.radii.push_back(std::min(m, out.radii.back()) / 2.0);
    }
    return out;
}

}  // namespace ssc
