// ssc: command-line front end for scene files.
//
// Exit codes: 0 every task passed, 1 a task failed or errored, 2 usage or
// scene error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssc/cli_io.hpp"
#include "ssc/error.hpp"

namespace {

constexpr int kUsageError = 2;

struct Globals {
    std::string scene;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<double> tol;
};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ssc::Error(ssc::ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    f << text;
}

ssc::Scene require_scene(const Globals& g) {
    if (g.scene.empty()) throw ssc::Error(ssc::ErrorCode::InvalidArgument, "--scene is required");
    return ssc::load_scene_file(g.scene);
}

int run_single(const Globals& g, ssc::TaskSpec task) {
    const auto scene = require_scene(g);
    if (!task.function.empty()) scene.function(task.function);
    if (!task.point.empty()) scene.point(task.point);
    if (!task.seed) task.seed = 0;
    ssc::ReportBundle bundle;
    bundle.records.push_back(ssc::run_task(scene, task, 0, {g.seed, g.tol}));
    write_output(g.out, ssc::report_csv(bundle));
    return bundle.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strongly separately continuous functions on sigma-products: build, evaluate, verify"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--scene", g.scene, "Scene JSON file");
    app.add_option("--seed", g.seed, "Seed replacing every task seed");
    app.add_option("--out", g.out, "Output file (default stdout)");
    app.add_option("--tol", g.tol, "Tolerance replacing task tolerances");

    std::string function, point;
    auto add_target = [&](CLI::App* sub, bool need_function, bool need_point) {
        auto* f = sub->add_option("--function,-f", function, "Function name");
        auto* p = sub->add_option("--point,-p", point, "Point name");
        if (need_function) f->required();
        if (need_point) p->required();
    };

    auto* verify = app.add_subcommand("verify", "Run every task of the scene and write the report CSV");

    auto* eval = app.add_subcommand("eval", "Evaluate a function at a point");
    add_target(eval, true, true);

    auto* build = app.add_subcommand("build", "Validate the scene and print its canonical form");

    auto* check = app.add_subcommand("check", "Run one check");
    check->require_subcommand(1);
    std::size_t index = 1, samples = 0, horizon = 0;
    auto* c_ssc = check->add_subcommand("ssc", "Strong separate continuity at a point");
    auto* c_sep = check->add_subcommand("sep", "Separate continuity along one coordinate");
    auto* c_crit = check->add_subcommand("criterion", "Finite-splice continuity criterion");
    auto* c_scont = check->add_subcommand("scont", "Constancy on sigma-components");
    auto* c_open = check->add_subcommand("nearly-open", "Openness of finite traces of the discontinuity set");
    auto* c_sym = check->add_subcommand("symmetric", "Projective symmetry of a box around a point");
    for (auto* c : {c_ssc, c_sep}) {
        add_target(c, true, true);
        c->add_option("--index,-t", index, "Coordinate index");
    }
    add_target(c_crit, true, true);
    c_crit->add_option("--horizon", horizon, "Largest index in T0");
    bool with_neighborhood = false;
    c_crit->add_flag("--neighborhood", with_neighborhood, "Also try the continuity neighborhood box");
    add_target(c_scont, true, true);
    add_target(c_open, true, false);
    c_open->add_option("--horizon", horizon, "Largest trace dimension");
    std::string mode = "analytic";
    c_open->add_option("--mode", mode, "analytic or grid")->check(CLI::IsMember({"analytic", "grid"}));
    add_target(c_sym, false, true);
    std::vector<std::string> radii{"1:0.5"};
    c_sym->add_option("--radius", radii, "Box radius as INDEX:R (repeatable)");
    for (auto* c : {c_ssc, c_crit, c_scont, c_sym}) c->add_option("--samples", samples, "Samples");

    auto* witness = app.add_subcommand("witness", "Escape witness for a ball-product function at a point of W");
    add_target(witness, true, true);
    std::size_t m = 1;
    witness->add_option("--m", m, "Witness index m");

    auto* osc = app.add_subcommand("oscillation", "Oscillation estimate at a point");
    add_target(osc, true, true);

    auto* slice = app.add_subcommand("slice", "Evaluate a function over a 2-D coordinate grid");
    add_target(slice, true, true);
    std::vector<std::size_t> coords{1, 2};
    std::vector<double> range{-2.0, 2.0};
    std::size_t steps = 81;
    slice->add_option("--coords", coords, "Two coordinate indices")->expected(2)->delimiter(',');
    slice->add_option("--range", range, "Grid range LO,HI")->expected(2)->delimiter(',');
    slice->add_option("--steps", steps, "Grid points per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        ssc::TaskSpec task;
        task.function = function;
        task.point = point;
        if (samples) task.params["samples"] = samples;
        if (horizon) task.params["horizon"] = horizon;

        if (verify->parsed()) {
            const auto scene = require_scene(g);
            const auto bundle = ssc::run_tasks(scene, {g.seed, g.tol});
            write_output(g.out, ssc::report_csv(bundle));
            return bundle.exit_code();
        }
        if (build->parsed()) {
            const auto scene = require_scene(g);
            write_output(g.out, ssc::emit_scene(scene.spec));
            for (const auto& [name, f] : scene.functions) std::cerr << name << ": " << f.describe() << "\n";
            return 0;
        }
        if (eval->parsed()) {
            task.kind = "eval";
            return run_single(g, task);
        }
        if (witness->parsed()) {
            task.kind = "witness";
            task.params["m"] = m;
            return run_single(g, task);
        }
        if (osc->parsed()) {
            task.kind = "oscillation";
            return run_single(g, task);
        }
        if (slice->parsed()) {
            const auto scene = require_scene(g);
            ssc::SliceSpec spec{coords[0], coords[1], range[0], range[1], steps};
            const auto rows = ssc::emit_slice(scene.space, scene.function(function), scene.point(point), spec);
            write_output(g.out, ssc::slice_csv(rows));
            return 0;
        }
        if (c_ssc->parsed() || c_sep->parsed()) {
            task.kind = c_ssc->parsed() ? "ssc" : "sep";
            task.params["index"] = index;
        } else if (c_crit->parsed()) {
            task.kind = "criterion";
            if (with_neighborhood) task.params["neighborhood"] = true;
        } else if (c_scont->parsed()) {
            task.kind = "scont";
        } else if (c_open->parsed()) {
            task.kind = "nearly_open";
            task.params["mode"] = mode;
        } else if (c_sym->parsed()) {
            task.kind = "symmetric";
            nlohmann::json r = nlohmann::json::object();
            for (const auto& spec : radii) {
                const auto colon = spec.find(':');
                if (colon == std::string::npos) throw CLI::ValidationError("--radius", "expected INDEX:R");
                r[spec.substr(0, colon)] = std::stod(spec.substr(colon + 1));
            }
            task.params["radii"] = r;
        }
        return run_single(g, task);
    } catch (const ssc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
}
