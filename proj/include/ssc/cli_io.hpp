#pragma once

// Scene files (JSON), task execution and CSV output.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ssc/constructions.hpp"
#include "ssc/core_space.hpp"

namespace ssc {

struct BallSpec {
    AnchorId anchor;
    std::map<Index, CoordVector> center;  // overrides of the anchor
    Radii radii;

    bool operator==(const BallSpec&) const = default;
};

/// Serializable description of a function. Only the fields of `kind` are
/// meaningful; references to other functions and points are by name.
struct FunctionSpec {
    FunctionKind kind = FunctionKind::Constant;
    std::vector<BallSpec> balls;  // BallProduct: one, WeightedUnion: M
    std::string reference;        // ComponentIndicator: point name
    double inside = 0.0;
    double outside = 1.0;
    AlgebraOp op = AlgebraOp::Add;
    std::vector<std::string> args;  // Algebra operands or Series terms
    std::vector<double> weights;
    double tail_bound = 0.0;
    double value = 0.0;  // Constant
    Index index = 1;     // CoordinateNorm

    bool operator==(const FunctionSpec&) const = default;
};

struct TaskSpec {
    std::string kind;
    std::string function;  // empty when unused
    std::string point;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> expect;  // compared against the outcome
    nlohmann::json params = nlohmann::json::object();

    bool operator==(const TaskSpec&) const = default;
};

struct SceneSpec {
    SpaceFamily spaces;
    std::vector<Anchor> anchors;
    std::map<std::string, SparsePoint> points;
    std::map<std::string, FunctionSpec> functions;
    std::vector<TaskSpec> tasks;

    bool operator==(const SceneSpec&) const = default;
};

/// A validated scene with its space and functions built.
struct Scene {
    SceneSpec spec;
    SigmaSpace space;
    std::map<std::string, ConstructedFunction> functions;

    const ConstructedFunction& function(const std::string& name) const;
    const SparsePoint& point(const std::string& name) const;
};

/// Errors carry the JSON path of the offending value, e.g.
/// `$.functions.f.radii.prefix[0]`.
Scene parse_scene(std::string_view text);
Scene load_scene_file(const std::string& path);
Scene build_scene(SceneSpec spec);
nlohmann::json scene_to_json(const SceneSpec& spec);
std::string emit_scene(const SceneSpec& spec);

bool is_task_kind(std::string_view kind);

struct ReportRecord {
    std::size_t task = 0;
    std::string kind;
    std::string target;
    std::string status;
    std::optional<double> value;
    std::string detail;
    int severity = 0;  // 0 pass, 1 fail or error
};

struct ReportBundle {
    std::vector<ReportRecord> records;

    int exit_code() const;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;  // replaces every task seed
    std::optional<double> tol;          // replaces tolerance parameters
};

ReportRecord run_task(const Scene& scene, const TaskSpec& task, std::size_t index, const RunOptions& options = {});
ReportBundle run_tasks(const Scene& scene, const RunOptions& options = {});

/// Header `task,kind,target,status,value,detail`, LF line endings, values
/// with 17 significant digits.
std::string report_csv(const ReportBundle& bundle);

struct SliceSpec {
    Index first = 1;
    Index second = 2;
    double lo = -2.0;
    double hi = 2.0;
    std::size_t steps = 81;  // grid points per axis
};

struct SliceRow {
    std::size_t i = 0;
    std::size_t j = 0;
    double c1 = 0.0;
    double c2 = 0.0;
    double value = 0.0;
};

/// f over a 2-D grid: the leading scalar of coordinates `first` and `second`
/// ranges over [lo, hi]; everything else is taken from `base`.
std::vector<SliceRow> emit_slice(const SigmaSpace& space, const ConstructedFunction& f, const SparsePoint& base,
                                 const SliceSpec& spec);
std::string slice_csv(const std::vector<SliceRow>& rows);

std::string format_number(double v);

}  // namespace ssc
