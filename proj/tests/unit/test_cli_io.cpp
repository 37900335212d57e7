#include <doctest.h>

#include <string>

#include "ssc/cli_io.hpp"
#include "ssc/error.hpp"

using namespace ssc;

namespace {

const char* kMinimal = R"({
  "spaces": {"prefix": [], "tail": {"dim": 1, "norm": "l2"}},
  "anchors": {"zero": {}},
  "points": {"o": {"anchor": "zero"}, "x": {"anchor": "zero", "coords": {"1": [3.0]}}},
  "functions": {"f": {"kind": "ball_product", "anchor": "zero", "center": {}, "radii": {"tail": 1.0}}},
  "tasks": [
    {"kind": "eval", "function": "f", "point": "x"},
    {"kind": "oscillation", "function": "f", "point": "o", "seed": 3, "expect": "DISCONTINUOUS"},
    {"kind": "criterion", "function": "f", "point": "o", "seed": 4}
  ]
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

ErrorCode code_of(const std::string& text) {
    try {
        parse_scene(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("scene was accepted");
    return ErrorCode::Lookup;
}

}  // namespace

TEST_CASE("minimal scene parses and runs") {
    const auto scene = parse_scene(kMinimal);
    CHECK(scene.functions.size() == 1);
    CHECK(scene.function("f").kind() == FunctionKind::BallProduct);
    const auto bundle = run_tasks(scene);
    REQUIRE(bundle.records.size() == 3);
    CHECK(bundle.records[0].status == "OK");
    CHECK(bundle.records[0].value == 1.0);
    CHECK(bundle.records[1].status == "PASS");
    CHECK(bundle.records[2].status == "NOT_FOUND");
    CHECK(bundle.exit_code() == 0);
}

TEST_CASE("validation errors") {
    const std::string base = kMinimal;
    CHECK(code_of(replace(base, R"("tail": 1.0)", R"("tail": 0.0)")) == ErrorCode::RadiusNonpositive);
    CHECK(code_of(replace(base, R"("function": "f", "point": "x")", R"("function": "nope", "point": "x")")) ==
          ErrorCode::UnresolvedRef);
    CHECK(code_of(replace(base, R"("point": "x")", R"("point": "y")")) == ErrorCode::UnresolvedRef);
    CHECK(code_of(replace(base, R"("seed": 3, )", "")) == ErrorCode::SchemaViolation);
    CHECK(code_of(replace(base, R"("coords": {"1": [3.0]})", R"("coords": {"1": [3.0, 1.0]})")) ==
          ErrorCode::DimensionMismatch);
    CHECK(code_of(replace(base, R"("kind": "eval")", R"("kind": "teleport")")) == ErrorCode::SchemaViolation);
    CHECK(code_of("{ not json") == ErrorCode::SchemaViolation);
    try {
        parse_scene(replace(base, R"("radii": {"tail": 1.0})", R"("radii": {"tail": 1.0, "colour": 2})"));
        FAIL("unknown field accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaViolation);
        CHECK(std::string(e.what()).find("$.functions.f.radii") != std::string::npos);
    }
    const auto cyclic = replace(base, R"("f": {"kind": "ball_product", "anchor": "zero", "center": {}, "radii": {"tail": 1.0}})",
                                R"("f": {"kind": "algebra", "op": "abs", "args": ["f"]})");
    CHECK(code_of(cyclic) == ErrorCode::SchemaViolation);
}

TEST_CASE("canonical form round trips") {
    const auto scene = parse_scene(kMinimal);
    const auto text = emit_scene(scene.spec);
    const auto again = parse_scene(text);
    CHECK(again.spec == scene.spec);
    CHECK(emit_scene(again.spec) == text);
}

TEST_CASE("empty task list") {
    const std::string base = kMinimal;
    const auto scene = parse_scene(base.substr(0, base.find("\"tasks\"")) + "\"tasks\": []\n}");
    const auto bundle = run_tasks(scene);
    CHECK(bundle.records.empty());
    CHECK(bundle.exit_code() == 0);
    CHECK(report_csv(bundle) == "task,kind,target,status,value,detail\n");
}

TEST_CASE("task failures set the exit code and keep going") {
    auto text = replace(kMinimal, R"("expect": "DISCONTINUOUS")", R"("expect": "LIKELY_CONTINUOUS")");
    const auto bundle = run_tasks(parse_scene(text));
    REQUIRE(bundle.records.size() == 3);
    CHECK(bundle.records[1].status == "FAIL");
    CHECK(bundle.records[2].status == "NOT_FOUND");
    CHECK(bundle.exit_code() == 1);
}

TEST_CASE("report is byte-identical across runs and seeds override tasks") {
    const auto scene = parse_scene(kMinimal);
    CHECK(report_csv(run_tasks(scene)) == report_csv(run_tasks(scene)));
    CHECK(report_csv(run_tasks(scene, {7, std::nullopt})) == report_csv(run_tasks(scene, {7, std::nullopt})));
}

TEST_CASE("csv quoting and number format") {
    ReportBundle b;
    b.records.push_back({0, "eval", "f@x", "OK", 0.1, "a, \"b\"", 0});
    CHECK(report_csv(b) == "task,kind,target,status,value,detail\n0,eval,f@x,OK,0.10000000000000001,\"a, \"\"b\"\"\"\n");
    CHECK(format_number(1.0) == "1");
}

TEST_CASE("slice over the unit square") {
    const auto scene = parse_scene(kMinimal);
    const auto rows = emit_slice(scene.space, scene.function("f"), scene.point("o"), {1, 2, -2.0, 2.0, 41});
    CHECK(rows.size() == 41 * 41);
    for (const auto& r : rows) {
        const double m = std::max(std::abs(r.c1), std::abs(r.c2));
        if (m < 1.0 - 1e-9) CHECK(r.value == 0.0);
        if (m > 1.0 + 1e-9 && std::abs(std::abs(r.c1) - 1.0) > 1e-9 && std::abs(std::abs(r.c2) - 1.0) > 1e-9)
            CHECK(r.value > 0.0);
    }
    CHECK(slice_csv(rows).rfind("i,j,c1,c2,value\n", 0) == 0);
}
