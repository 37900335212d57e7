#include "ssc/cli_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "ssc/analysis.hpp"
#include "ssc/error.hpp"
#include "ssc/random.hpp"
#include "ssc/s_topology.hpp"
#include "ssc/suite.hpp"

namespace ssc {

using json = nlohmann::json;

namespace {

// ---------------------------------------------------------------- reading

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
    throw Error(ErrorCode::SchemaViolation, path + ": " + msg);
}

template <class F>
auto at_path(const std::string& path, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.message());
    }
}

std::string key_path(const std::string& path, const std::string& key) { return path + "." + key; }
std::string item_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& need_object(const json& j, const std::string& path) {
    if (!j.is_object()) schema(path, "expected an object");
    return j;
}

const json& need_array(const json& j, const std::string& path) {
    if (!j.is_array()) schema(path, "expected an array");
    return j;
}

const json& need(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) schema(path, "missing field '" + key + "'");
    return *it;
}

void allow_only(const json& obj, std::initializer_list<std::string_view> keys, const std::string& path) {
    for (const auto& [k, v] : obj.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) schema(key_path(path, k), "unknown field");
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema(path, "expected a finite number");
    return v;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema(path, "expected a string");
    return j.get<std::string>();
}

std::uint64_t as_unsigned(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) schema(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

Index as_index(const json& j, const std::string& path) {
    const auto v = as_unsigned(j, path);
    if (v == 0) schema(path, "indices start at 1");
    return static_cast<Index>(v);
}

Index index_key(const std::string& key, const std::string& path) {
    if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; }))
        schema(path, "coordinate keys are positive integers");
    const auto v = std::stoull(key);
    if (v == 0) schema(path, "indices start at 1");
    return static_cast<Index>(v);
}

CoordVector as_vector(const json& j, const std::string& path) {
    need_array(j, path);
    if (j.empty()) schema(path, "coordinate vectors are nonempty");
    CoordVector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_number(j[i], item_path(path, i)));
    return v;
}

std::map<Index, CoordVector> as_coords(const json& j, const std::string& path) {
    need_object(j, path);
    std::map<Index, CoordVector> out;
    for (const auto& [k, v] : j.items()) out[index_key(k, key_path(path, k))] = as_vector(v, key_path(path, k));
    return out;
}

NormKind as_norm(const json& j, const std::string& path) {
    const auto s = as_string(j, path);
    if (s == "l1") return NormKind::L1;
    if (s == "l2") return NormKind::L2;
    if (s == "linf") return NormKind::LInf;
    schema(path, "norm must be one of l1, l2, linf");
}

std::string_view norm_name(NormKind k) {
    switch (k) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::LInf: return "linf";
    }
    return "l2";
}

CoordSpace as_coord_space(const json& j, const std::string& path) {
    need_object(j, path);
    allow_only(j, {"dim", "norm"}, path);
    const auto dim = as_unsigned(need(j, "dim", path), key_path(path, "dim"));
    if (dim == 0) schema(key_path(path, "dim"), "dimension must be at least 1");
    return {static_cast<std::size_t>(dim), as_norm(need(j, "norm", path), key_path(path, "norm"))};
}

Radii as_radii(const json& j, const std::string& path) {
    need_object(j, path);
    allow_only(j, {"prefix", "tail"}, path);
    Radii r;
    if (j.contains("prefix")) {
        const auto& p = need_array(j["prefix"], key_path(path, "prefix"));
        for (std::size_t i = 0; i < p.size(); ++i) r.prefix.push_back(as_number(p[i], item_path(key_path(path, "prefix"), i)));
    }
    r.tail = as_number(need(j, "tail", path), key_path(path, "tail"));
    return r;
}

std::vector<std::string> as_names(const json& j, const std::string& path) {
    need_array(j, path);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], item_path(path, i)));
    return out;
}

const std::map<std::string, FunctionKind>& function_kinds() {
    static const std::map<std::string, FunctionKind> kinds{
        {"ball_product", FunctionKind::BallProduct}, {"union", FunctionKind::WeightedUnion},
        {"indicator", FunctionKind::ComponentIndicator}, {"algebra", FunctionKind::Algebra},
        {"series", FunctionKind::Series}, {"constant", FunctionKind::Constant},
        {"coord_norm", FunctionKind::CoordinateNorm}};
    return kinds;
}

const std::map<std::string, AlgebraOp>& algebra_ops() {
    static const std::map<std::string, AlgebraOp> ops{{"add", AlgebraOp::Add}, {"sub", AlgebraOp::Sub},
                                                      {"mul", AlgebraOp::Mul}, {"abs", AlgebraOp::Abs},
                                                      {"min", AlgebraOp::Min}, {"max", AlgebraOp::Max}};
    return ops;
}

template <class M, class V>
std::string name_of(const M& table, V value) {
    for (const auto& [k, v] : table)
        if (v == value) return k;
    return {};
}

BallSpec as_ball(const json& j, const std::string& path, const std::optional<AnchorId>& anchor) {
    need_object(j, path);
    BallSpec b;
    if (anchor) {
        allow_only(j, {"center", "radii"}, path);
        b.anchor = *anchor;
    } else {
        allow_only(j, {"kind", "anchor", "center", "radii"}, path);
        b.anchor = AnchorId(as_string(need(j, "anchor", path), key_path(path, "anchor")));
    }
    if (j.contains("center")) b.center = as_coords(j["center"], key_path(path, "center"));
    b.radii = as_radii(need(j, "radii", path), key_path(path, "radii"));
    return b;
}

FunctionSpec as_function(const json& j, const std::string& path) {
    need_object(j, path);
    const auto kind_name = as_string(need(j, "kind", path), key_path(path, "kind"));
    auto it = function_kinds().find(kind_name);
    if (it == function_kinds().end()) schema(key_path(path, "kind"), "unknown function kind '" + kind_name + "'");
    FunctionSpec f;
    f.kind = it->second;
    switch (f.kind) {
    case FunctionKind::BallProduct:
        f.balls.push_back(as_ball(j, path, std::nullopt));
        break;
    case FunctionKind::WeightedUnion: {
        allow_only(j, {"kind", "anchor", "balls"}, path);
        const AnchorId anchor(as_string(need(j, "anchor", path), key_path(path, "anchor")));
        const auto bp = key_path(path, "balls");
        const auto& balls = need_array(need(j, "balls", path), bp);
        for (std::size_t i = 0; i < balls.size(); ++i) f.balls.push_back(as_ball(balls[i], item_path(bp, i), anchor));
        break;
    }
    case FunctionKind::ComponentIndicator:
        allow_only(j, {"kind", "reference", "inside", "outside"}, path);
        f.reference = as_string(need(j, "reference", path), key_path(path, "reference"));
        if (j.contains("inside")) f.inside = as_number(j["inside"], key_path(path, "inside"));
        if (j.contains("outside")) f.outside = as_number(j["outside"], key_path(path, "outside"));
        break;
    case FunctionKind::Algebra: {
        allow_only(j, {"kind", "op", "args"}, path);
        const auto op = as_string(need(j, "op", path), key_path(path, "op"));
        auto oit = algebra_ops().find(op);
        if (oit == algebra_ops().end()) schema(key_path(path, "op"), "unknown operation '" + op + "'");
        f.op = oit->second;
        f.args = as_names(need(j, "args", path), key_path(path, "args"));
        break;
    }
    case FunctionKind::Series: {
        allow_only(j, {"kind", "weights", "terms", "tail_bound"}, path);
        const auto wp = key_path(path, "weights");
        const auto& w = need_array(need(j, "weights", path), wp);
        for (std::size_t i = 0; i < w.size(); ++i) f.weights.push_back(as_number(w[i], item_path(wp, i)));
        f.args = as_names(need(j, "terms", path), key_path(path, "terms"));
        if (j.contains("tail_bound")) f.tail_bound = as_number(j["tail_bound"], key_path(path, "tail_bound"));
        break;
    }
    case FunctionKind::Constant:
        allow_only(j, {"kind", "value"}, path);
        f.value = as_number(need(j, "value", path), key_path(path, "value"));
        break;
    case FunctionKind::CoordinateNorm:
        allow_only(j, {"kind", "index"}, path);
        f.index = as_index(need(j, "index", path), key_path(path, "index"));
        break;
    case FunctionKind::Custom:
        schema(path, "custom functions cannot be described in a scene");
    }
    return f;
}

// ---------------------------------------------------------------- tasks

struct TaskKindInfo {
    bool needs_function;
    bool needs_point;
    bool sampled;
    std::vector<std::string_view> params;
};

const std::map<std::string, TaskKindInfo, std::less<>>& task_kinds() {
    static const std::map<std::string, TaskKindInfo, std::less<>> kinds{
        {"eval", {true, true, false, {}}},
        {"build", {true, false, false, {}}},
        {"ssc", {true, true, true, {"index", "levels", "shrink", "samples", "tol"}}},
        {"sep", {true, true, true, {"index", "offsets", "directions", "tol"}}},
        {"criterion", {true, true, true, {"eps", "horizon", "samples", "neighborhood"}}},
        {"scont", {true, true, true, {"samples"}}},
        {"nearly_open", {true, false, false, {"horizon", "mode", "step"}}},
        {"symmetric", {false, true, true, {"radii", "samples"}}},
        {"witness", {true, true, false, {"m"}}},
        {"oscillation", {true, true, true, {"levels", "shrink", "samples", "tol"}}},
        {"neighborhood", {true, true, true, {"eps", "samples"}}},
        {"slice", {true, true, false, {"first", "second", "lo", "hi", "steps"}}},
        {"suite", {false, false, true, {"scale", "only"}}},
    };
    return kinds;
}

TaskSpec as_task(const json& j, const std::string& path) {
    need_object(j, path);
    TaskSpec t;
    t.kind = as_string(need(j, "kind", path), key_path(path, "kind"));
    auto it = task_kinds().find(t.kind);
    if (it == task_kinds().end()) schema(key_path(path, "kind"), "unknown task kind '" + t.kind + "'");
    for (const auto& [k, v] : j.items()) {
        const auto p = key_path(path, k);
        if (k == "kind") continue;
        if (k == "function") t.function = as_string(v, p);
        else if (k == "point") t.point = as_string(v, p);
        else if (k == "seed") t.seed = as_unsigned(v, p);
        else if (k == "expect") t.expect = as_string(v, p);
        else if (std::find(it->second.params.begin(), it->second.params.end(), k) != it->second.params.end())
            t.params[k] = v;
        else schema(p, "unknown field for task kind '" + t.kind + "'");
    }
    return t;
}

// ---------------------------------------------------------------- writing

json coords_json(const std::map<Index, CoordVector>& coords) {
    json j = json::object();
    for (const auto& [n, v] : coords) j[std::to_string(n)] = v;
    return j;
}

json radii_json(const Radii& r) { return {{"prefix", r.prefix}, {"tail", r.tail}}; }

json function_json(const FunctionSpec& f) {
    json j{{"kind", name_of(function_kinds(), f.kind)}};
    switch (f.kind) {
    case FunctionKind::BallProduct:
        j["anchor"] = f.balls.front().anchor.str();
        j["center"] = coords_json(f.balls.front().center);
        j["radii"] = radii_json(f.balls.front().radii);
        break;
    case FunctionKind::WeightedUnion:
        j["anchor"] = f.balls.front().anchor.str();
        j["balls"] = json::array();
        for (const auto& b : f.balls) j["balls"].push_back({{"center", coords_json(b.center)}, {"radii", radii_json(b.radii)}});
        break;
    case FunctionKind::ComponentIndicator:
        j["reference"] = f.reference;
        j["inside"] = f.inside;
        j["outside"] = f.outside;
        break;
    case FunctionKind::Algebra:
        j["op"] = name_of(algebra_ops(), f.op);
        j["args"] = f.args;
        break;
    case FunctionKind::Series:
        j["weights"] = f.weights;
        j["terms"] = f.args;
        j["tail_bound"] = f.tail_bound;
        break;
    case FunctionKind::Constant: j["value"] = f.value; break;
    case FunctionKind::CoordinateNorm: j["index"] = f.index; break;
    case FunctionKind::Custom: break;
    }
    return j;
}

json space_json(const CoordSpace& s) { return {{"dim", s.dim}, {"norm", norm_name(s.norm)}}; }

// ---------------------------------------------------------------- running

double param_number(const TaskSpec& t, const char* key, double fallback) {
    auto it = t.params.find(key);
    return it == t.params.end() ? fallback : as_number(*it, "$.tasks." + t.kind + "." + key);
}

std::size_t param_count(const TaskSpec& t, const char* key, std::size_t fallback) {
    auto it = t.params.find(key);
    if (it == t.params.end()) return fallback;
    const auto v = as_unsigned(*it, "$.tasks." + t.kind + "." + key);
    if (v == 0) schema("$.tasks." + t.kind + "." + key, "must be at least 1");
    return static_cast<std::size_t>(v);
}

std::string param_string(const TaskSpec& t, const char* key, const std::string& fallback) {
    auto it = t.params.find(key);
    return it == t.params.end() ? fallback : as_string(*it, "$.tasks." + t.kind + "." + key);
}

std::string join_indices(const std::set<Index>& s) {
    std::string out = "{";
    for (auto it = s.begin(); it != s.end(); ++it) out += (it == s.begin() ? "" : " ") + std::to_string(*it);
    return out + "}";
}

NetSpec task_net(const TaskSpec& t, std::uint64_t seed) {
    NetSpec net;
    net.levels = param_count(t, "levels", net.levels);
    net.shrink = param_number(t, "shrink", net.shrink);
    net.samples = param_count(t, "samples", net.samples);
    net.seed = seed;
    return net;
}

std::vector<BallProduct> require_balls(const ConstructedFunction& f) {
    auto balls = ball_products_of(f);
    if (balls.empty()) throw Error(ErrorCode::Precondition, "function is not built from ball products");
    return balls;
}

struct Outcome {
    std::string status;
    std::optional<double> value;
    std::string detail;
};

Outcome execute(const Scene& scene, const TaskSpec& t, std::uint64_t seed, const std::optional<double>& tol) {
    const auto& space = scene.space;
    const ConstructedFunction* f = t.function.empty() ? nullptr : &scene.function(t.function);
    const SparsePoint* u = t.point.empty() ? nullptr : &scene.point(t.point);
    auto pass_fail = [](bool ok) { return std::string(ok ? "PASS" : "FAIL"); };

    if (t.kind == "eval") return {"OK", evaluate(space, *f, *u), ""};
    if (t.kind == "build") return {"PASS", std::nullopt, f->describe()};
    if (t.kind == "ssc") {
        const auto idx = param_count(t, "index", 1);
        const auto rep = ssc_check(space, *f, *u, idx, task_net(t, seed), tol.value_or(param_number(t, "tol", kContinuityTol)));
        return {pass_fail(rep.passed), rep.last(), "levels " + std::to_string(rep.per_level.size())};
    }
    if (t.kind == "sep") {
        std::vector<double> offsets{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        if (auto it = t.params.find("offsets"); it != t.params.end()) {
            offsets.clear();
            const auto& a = need_array(*it, "$.tasks.sep.offsets");
            for (std::size_t i = 0; i < a.size(); ++i) offsets.push_back(as_number(a[i], item_path("$.tasks.sep.offsets", i)));
            if (offsets.empty()) schema("$.tasks.sep.offsets", "needs at least one offset");
        }
        const auto rep = separate_continuity_check(space, *f, *u, param_count(t, "index", 1), offsets,
                                                   tol.value_or(param_number(t, "tol", kContinuityTol)), seed,
                                                   param_count(t, "directions", 8));
        return {pass_fail(rep.passed), rep.last(), "offsets " + std::to_string(offsets.size())};
    }
    if (t.kind == "criterion") {
        const double eps = tol.value_or(param_number(t, "eps", 1e-2));
        const Index horizon = param_count(t, "horizon", 8);
        auto boxes = default_criterion_boxes(*u, horizon);
        if (auto it = t.params.find("neighborhood"); it != t.params.end() && it->is_boolean() && it->get<bool>())
            boxes.push_back(continuity_neighborhood(space, *f, *u, eps));
        const auto r = splice_criterion_check(space, *f, *u, eps, horizon, boxes, param_count(t, "samples", 64), seed);
        const std::string budget = "N=" + std::to_string(r.horizon) + " boxes=" + std::to_string(r.boxes_searched);
        if (!r.found) return {"NOT_FOUND", std::nullopt, budget};
        return {"FOUND", r.sup, "T0=" + join_indices(r.subset) + " box=" + std::to_string(r.box_index) + " " + budget};
    }
    if (t.kind == "scont") {
        Rng rng(seed);
        auto mutate = [&](SparsePoint x) {
            const Index top = space.max_relevant_index(x) + 4;
            const std::size_t k = uniform_index(rng, 1, 3);
            for (std::size_t i = 0; i < k; ++i) {
                const Index n = uniform_index(rng, 1, top);
                CoordVector v(space.family().at(n).dim);
                for (auto& c : v) c = uniform(rng, -3.0, 3.0);
                x = space.with_coordinate(x, n, std::move(v));
            }
            return x;
        };
        std::vector<std::pair<SparsePoint, SparsePoint>> pairs;
        for (std::size_t i = 0; i < param_count(t, "samples", 100); ++i) {
            auto x = i == 0 ? *u : mutate(*u);
            auto y = mutate(x);
            pairs.emplace_back(std::move(x), std::move(y));
        }
        const auto r = s_continuity_check(space, *f, pairs);
        return {pass_fail(r.passed), std::nullopt, "compared " + std::to_string(r.compared)};
    }
    if (t.kind == "nearly_open") {
        TraceCheckMode mode;
        const auto m = param_string(t, "mode", "analytic");
        if (m == "grid") mode.kind = TraceCheckMode::Kind::Grid;
        else if (m != "analytic") schema("$.tasks.nearly_open.mode", "mode must be analytic or grid");
        mode.step = param_number(t, "step", mode.step);
        mode.seed = seed;
        const auto verdicts =
            nearly_open_trace_check(space, ball_product_traces(space, require_balls(*f)), param_count(t, "horizon", 4), mode);
        for (const auto& v : verdicts)
            if (v.status != TraceStatus::Open)
                return {"FAIL", std::nullopt, std::string(to_string(v.status)) + " at n=" + std::to_string(v.n)};
        return {"PASS", std::nullopt, "horizon " + std::to_string(verdicts.size())};
    }
    if (t.kind == "symmetric") {
        BoxNeighborhood box{*u, {}};
        if (auto it = t.params.find("radii"); it != t.params.end()) {
            need_object(*it, "$.tasks.symmetric.radii");
            for (const auto& [k, v] : it->items()) {
                const auto p = "$.tasks.symmetric.radii." + k;
                const double r = as_number(v, p);
                if (!(r > 0.0)) throw Error(ErrorCode::RadiusNonpositive, p + ": box radii must be positive");
                box.radii[index_key(k, p)] = r;
            }
        }
        Rng rng(seed);
        const auto sample = sample_box(space, constant(0.0), box, param_count(t, "samples", 30), rng);
        SetPredicate inside{[&space, &box](const SparsePoint& x) { return space.box_contains(box, x); },
                            SetTag::BlackBox, "box"};
        const auto v = projective_symmetry_check(space, inside, *u, sample, MutationProbe{derive_seed(seed, 1)});
        return {v.passed() ? "PASS" : "COUNTEREXAMPLE", std::nullopt, "checks " + std::to_string(v.checks)};
    }
    if (t.kind == "witness") {
        const auto m = param_count(t, "m", 1);
        const auto balls = require_balls(*f);
        const auto& ball = balls.front();
        const double rho = sphere_gap(space, ball, *u);
        const auto x = oscillation_witness(space, *f, *u, m);
        const double value = evaluate(space, *f, x);
        return {pass_fail(std::abs(value - rho) <= kWitnessSlack && std::abs(evaluate(space, *f, *u)) == 0.0), value,
                "rho=" + format_number(rho) + " index=" + std::to_string(x.overrides.empty() ? 0 : x.overrides.rbegin()->first)};
    }
    if (t.kind == "oscillation") {
        const auto est = oscillation_estimate(space, *f, *u, task_net(t, seed),
                                              tol.value_or(param_number(t, "tol", kContinuityTol)));
        return {std::string(to_string(est.verdict)), est.certified_lower,
                "upper=" + format_number(est.sampled_upper.empty() ? 0.0 : est.sampled_upper.back())};
    }
    if (t.kind == "neighborhood") {
        const double eps = tol.value_or(param_number(t, "eps", 1e-2));
        const auto box = continuity_neighborhood(space, *f, *u, eps);
        const auto c = neighborhood_check(space, *f, *u, box, eps, param_count(t, "samples", 256), seed);
        return {pass_fail(c.passed), c.max_difference, "samples " + std::to_string(c.samples)};
    }
    if (t.kind == "slice") {
        SliceSpec s;
        s.first = param_count(t, "first", 1);
        s.second = param_count(t, "second", 2);
        s.lo = param_number(t, "lo", s.lo);
        s.hi = param_number(t, "hi", s.hi);
        s.steps = param_count(t, "steps", s.steps);
        const auto rows = emit_slice(space, *f, *u, s);
        double lo = rows.front().value, hi = lo;
        for (const auto& r : rows) {
            lo = std::min(lo, r.value);
            hi = std::max(hi, r.value);
        }
        return {"OK", hi, "rows " + std::to_string(rows.size()) + " min=" + format_number(lo)};
    }
    if (t.kind == "suite") {
        SuiteOptions opt;
        opt.seed = seed;
        opt.scale = param_number(t, "scale", 1.0);
        if (!(opt.scale > 0.0)) schema("$.tasks.suite.scale", "scale must be positive");
        if (auto it = t.params.find("only"); it != t.params.end()) {
            const auto& a = need_array(*it, "$.tasks.suite.only");
            for (std::size_t i = 0; i < a.size(); ++i)
                opt.only.insert(static_cast<int>(as_index(a[i], item_path("$.tasks.suite.only", i))));
        }
        const auto outcomes = run_suite(opt);
        std::string detail;
        std::size_t passed = 0;
        for (const auto& o : outcomes) {
            passed += o.passed;
            detail += (detail.empty() ? "" : " ") + std::to_string(o.id) + (o.passed ? ":PASS" : ":FAIL");
        }
        return {pass_fail(passed == outcomes.size()), static_cast<double>(passed), detail};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown task kind '" + t.kind + "'");
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

// ---------------------------------------------------------------- scene

const ConstructedFunction& Scene::function(const std::string& name) const {
    auto it = functions.find(name);
    if (it == functions.end()) throw Error(ErrorCode::UnresolvedRef, "unknown function '" + name + "'");
    return it->second;
}

const SparsePoint& Scene::point(const std::string& name) const {
    auto it = spec.points.find(name);
    if (it == spec.points.end()) throw Error(ErrorCode::UnresolvedRef, "unknown point '" + name + "'");
    return it->second;
}

bool is_task_kind(std::string_view kind) { return task_kinds().find(kind) != task_kinds().end(); }

Scene parse_scene(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        schema("$", std::string("invalid JSON: ") + e.what());
    }
    need_object(root, "$");
    allow_only(root, {"spaces", "anchors", "points", "functions", "tasks"}, "$");

    SceneSpec spec;
    const auto& sp = need_object(need(root, "spaces", "$"), "$.spaces");
    allow_only(sp, {"prefix", "tail"}, "$.spaces");
    std::vector<CoordSpace> prefix;
    if (sp.contains("prefix")) {
        const auto& p = need_array(sp["prefix"], "$.spaces.prefix");
        for (std::size_t i = 0; i < p.size(); ++i) prefix.push_back(as_coord_space(p[i], item_path("$.spaces.prefix", i)));
    }
    spec.spaces = SpaceFamily(std::move(prefix), as_coord_space(need(sp, "tail", "$.spaces"), "$.spaces.tail"));

    const auto& anchors = need_object(need(root, "anchors", "$"), "$.anchors");
    if (anchors.empty()) schema("$.anchors", "at least one anchor is required");
    for (const auto& [name, values] : anchors.items())
        spec.anchors.push_back(Anchor{AnchorId(name), as_coords(values, "$.anchors." + name)});

    if (root.contains("points")) {
        const auto& pts = need_object(root["points"], "$.points");
        for (const auto& [name, p] : pts.items()) {
            const auto path = "$.points." + name;
            need_object(p, path);
            allow_only(p, {"anchor", "coords"}, path);
            SparsePoint x{AnchorId(as_string(need(p, "anchor", path), path + ".anchor")), {}};
            if (p.contains("coords")) x.overrides = as_coords(p["coords"], path + ".coords");
            spec.points[name] = std::move(x);
        }
    }
    if (root.contains("functions")) {
        const auto& fns = need_object(root["functions"], "$.functions");
        for (const auto& [name, f] : fns.items()) spec.functions[name] = as_function(f, "$.functions." + name);
    }
    if (root.contains("tasks")) {
        const auto& tasks = need_array(root["tasks"], "$.tasks");
        for (std::size_t i = 0; i < tasks.size(); ++i) spec.tasks.push_back(as_task(tasks[i], item_path("$.tasks", i)));
    }
    return build_scene(std::move(spec));
}

Scene load_scene_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read scene file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

Scene build_scene(SceneSpec spec) {
    Scene scene;
    scene.space = at_path("$.anchors", [&] {
        for (std::size_t i = 0; i < spec.anchors.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (spec.anchors[i].id == spec.anchors[j].id)
                    throw Error(ErrorCode::SchemaViolation, "duplicate anchor '" + spec.anchors[i].id.str() + "'");
        return SigmaSpace(spec.spaces, spec.anchors);
    });
    const auto& space = scene.space;

    for (auto& [name, p] : spec.points) {
        const auto path = "$.points." + name;
        if (!space.has_anchor(p.anchor))
            throw Error(ErrorCode::UnresolvedRef, path + ".anchor: unknown anchor '" + p.anchor.str() + "'");
        p = at_path(path + ".coords", [&] { return space.make_point(p.anchor, p.overrides); });
    }

    std::set<std::string> visiting;
    std::function<ConstructedFunction(const std::string&, const std::string&)> build =
        [&](const std::string& name, const std::string& from) -> ConstructedFunction {
        if (auto it = scene.functions.find(name); it != scene.functions.end()) return it->second;
        auto sit = spec.functions.find(name);
        if (sit == spec.functions.end())
            throw Error(ErrorCode::UnresolvedRef, from + ": unknown function '" + name + "'");
        const auto path = "$.functions." + name;
        if (!visiting.insert(name).second)
            throw Error(ErrorCode::SchemaViolation, path + ": function references itself");
        const auto& fs = sit->second;
        auto make_ball = [&](const BallSpec& b, const std::string& bpath) {
            if (!space.has_anchor(b.anchor))
                throw Error(ErrorCode::UnresolvedRef, bpath + ".anchor: unknown anchor '" + b.anchor.str() + "'");
            return BallProduct{b.anchor, at_path(bpath + ".center", [&] { return space.make_point(b.anchor, b.center); }),
                               b.radii};
        };
        auto children = [&](const char* field) {
            std::vector<ConstructedFunction> out;
            for (std::size_t i = 0; i < fs.args.size(); ++i) out.push_back(build(fs.args[i], item_path(path + "." + field, i)));
            return out;
        };
        ConstructedFunction f = [&]() -> ConstructedFunction {
            switch (fs.kind) {
            case FunctionKind::BallProduct: {
                const auto ball = make_ball(fs.balls.front(), path);
                return at_path(path + ".radii", [&] { return build_ball_product_function(space, ball); });
            }
            case FunctionKind::WeightedUnion: {
                NearlyOpenUnion uni;
                for (std::size_t i = 0; i < fs.balls.size(); ++i) {
                    const auto bpath = item_path(path + ".balls", i);
                    uni.balls.push_back(make_ball(fs.balls[i], bpath));
                    at_path(bpath + ".radii", [&] { validate(space, uni.balls.back()); });
                }
                return at_path(path + ".balls", [&] { return build_union_function(space, uni); });
            }
            case FunctionKind::ComponentIndicator: {
                auto pit = spec.points.find(fs.reference);
                if (pit == spec.points.end())
                    throw Error(ErrorCode::UnresolvedRef, path + ".reference: unknown point '" + fs.reference + "'");
                return component_indicator(space, pit->second, fs.inside, fs.outside);
            }
            case FunctionKind::Algebra: {
                auto args = children("args");
                return at_path(path, [&] { return algebra(fs.op, std::move(args)); });
            }
            case FunctionKind::Series: {
                auto terms = children("terms");
                return at_path(path, [&] { return series(fs.weights, std::move(terms), fs.tail_bound); });
            }
            case FunctionKind::Constant: return constant(fs.value);
            case FunctionKind::CoordinateNorm: return coordinate_norm(fs.index);
            case FunctionKind::Custom: break;
            }
            throw Error(ErrorCode::SchemaViolation, path + ": unsupported function kind");
        }();
        visiting.erase(name);
        scene.functions.emplace(name, f);
        return f;
    };
    for (const auto& [name, fs] : spec.functions) build(name, "$.functions");

    for (std::size_t i = 0; i < spec.tasks.size(); ++i) {
        const auto& t = spec.tasks[i];
        const auto path = item_path("$.tasks", i);
        auto it = task_kinds().find(t.kind);
        if (it == task_kinds().end()) schema(path + ".kind", "unknown task kind '" + t.kind + "'");
        const auto& info = it->second;
        if (info.needs_function && t.function.empty()) schema(path, "task needs a function");
        if (info.needs_point && t.point.empty()) schema(path, "task needs a point");
        if (info.sampled && !t.seed) schema(path, "sampled tasks need a seed");
        if (!t.function.empty() && !scene.functions.contains(t.function))
            throw Error(ErrorCode::UnresolvedRef, path + ".function: unknown function '" + t.function + "'");
        if (!t.point.empty() && !spec.points.contains(t.point))
            throw Error(ErrorCode::UnresolvedRef, path + ".point: unknown point '" + t.point + "'");
    }
    scene.spec = std::move(spec);
    return scene;
}

nlohmann::json scene_to_json(const SceneSpec& spec) {
    json root;
    json prefix = json::array();
    for (const auto& s : spec.spaces.prefix()) prefix.push_back(space_json(s));
    root["spaces"] = {{"prefix", prefix}, {"tail", space_json(spec.spaces.tail())}};
    root["anchors"] = json::object();
    for (const auto& a : spec.anchors) root["anchors"][a.id.str()] = coords_json(a.values);
    root["points"] = json::object();
    for (const auto& [name, p] : spec.points)
        root["points"][name] = {{"anchor", p.anchor.str()}, {"coords", coords_json(p.overrides)}};
    root["functions"] = json::object();
    for (const auto& [name, f] : spec.functions) root["functions"][name] = function_json(f);
    root["tasks"] = json::array();
    for (const auto& t : spec.tasks) {
        json j = t.params;
        j["kind"] = t.kind;
        if (!t.function.empty()) j["function"] = t.function;
        if (!t.point.empty()) j["point"] = t.point;
        if (t.seed) j["seed"] = *t.seed;
        if (t.expect) j["expect"] = *t.expect;
        root["tasks"].push_back(std::move(j));
    }
    return root;
}

std::string emit_scene(const SceneSpec& spec) { return scene_to_json(spec).dump(2) + "\n"; }

// ---------------------------------------------------------------- reports

int ReportBundle::exit_code() const {
    int worst = 0;
    for (const auto& r : records) worst = std::max(worst, r.severity);
    return worst;
}

ReportRecord run_task(const Scene& scene, const TaskSpec& task, std::size_t index, const RunOptions& options) {
    ReportRecord r;
    r.task = index;
    r.kind = task.kind;
    r.target = task.function;
    if (!task.point.empty()) r.target += (r.target.empty() ? "" : "@") + task.point;
    const std::uint64_t seed = options.seed.value_or(task.seed.value_or(0));
    try {
        auto o = execute(scene, task, seed, options.tol);
        r.status = std::move(o.status);
        r.value = o.value;
        r.detail = std::move(o.detail);
        r.severity = (r.status == "FAIL" || r.status == "COUNTEREXAMPLE") ? 1 : 0;
    } catch (const Error& e) {
        r.status = "ERROR";
        r.detail = e.what();
        r.severity = 1;
    }
    if (task.expect) {
        const bool match = r.status == *task.expect;
        r.detail = "outcome " + r.status + (r.detail.empty() ? "" : "; " + r.detail);
        r.status = match ? "PASS" : "FAIL";
        r.severity = match ? 0 : 1;
    }
    return r;
}

ReportBundle run_tasks(const Scene& scene, const RunOptions& options) {
    ReportBundle b;
    for (std::size_t i = 0; i < scene.spec.tasks.size(); ++i)
        b.records.push_back(run_task(scene, scene.spec.tasks[i], i, options));
    return b;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string report_csv(const ReportBundle& bundle) {
    std::string out = "task,kind,target,status,value,detail\n";
    for (const auto& r : bundle.records) {
        out += std::to_string(r.task) + "," + csv_field(r.kind) + "," + csv_field(r.target) + "," +
               csv_field(r.status) + "," + (r.value ? format_number(*r.value) : "") + "," + csv_field(r.detail) + "\n";
    }
    return out;
}

std::vector<SliceRow> emit_slice(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& base,
                                 const SliceSpec& spec) {
    if (spec.first == 0 || spec.second == 0 || spec.first == spec.second)
        throw Error(ErrorCode::InvalidArgument, "slice needs two distinct coordinates");
    if (spec.steps < 2 || !(spec.hi > spec.lo)) throw Error(ErrorCode::InvalidArgument, "slice grid is empty");
    const double h = (spec.hi - spec.lo) / static_cast<double>(spec.steps - 1);
    auto axis = [&](std::size_t k) { return k + 1 == spec.steps ? spec.hi : spec.lo + static_cast<double>(k) * h; };
    auto v1 = space.coordinate(base, spec.first);
    auto v2 = space.coordinate(base, spec.second);
    std::vector<SliceRow> rows;
    rows.reserve(spec.steps * spec.steps);
    for (std::size_t i = 0; i < spec.steps; ++i) {
        for (std::size_t j = 0; j < spec.steps; ++j) {
            v1[0] = axis(i);
            v2[0] = axis(j);
            const auto x = space.with_coordinate(space.with_coordinate(base, spec.first, v1), spec.second, v2);
            rows.push_back({i, j, v1[0], v2[0], evaluate(space, f, x)});
        }
    }
    return rows;
}

std::string slice_csv(const std::vector<SliceRow>& rows) {
    std::string out = "i,j,c1,c2,value\n";
    for (const auto& r : rows)
        out += std::to_string(r.i) + "," + std::to_string(r.j) + "," + format_number(r.c1) + "," + format_number(r.c2) +
               "," + format_number(r.value) + "\n";
    return out;
}

}  // namespace ssc
