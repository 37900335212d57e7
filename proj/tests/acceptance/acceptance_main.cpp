// Acceptance run: one line per criterion, nonzero exit if any fails.
//
// usage: ssc_acceptance [GOLDEN_SCENE]

#include <chrono>
#include <cstdio>
#include <string>

#include "ssc/cli_io.hpp"
#include "ssc/error.hpp"
#include "ssc/suite.hpp"

#ifndef SSC_GOLDEN_SCENE
#define SSC_GOLDEN_SCENE "scenes/golden.json"
#endif

namespace {

void print(int id, bool passed, const std::string& name, const std::string& detail, double seconds) {
    std::printf("criterion %d: %s  %s  [%.1fs]\n    %s\n", id, passed ? "PASS" : "FAIL", name.c_str(), seconds,
                detail.c_str());
    std::fflush(stdout);
}

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::string scene_path = argc > 1 ? argv[1] : SSC_GOLDEN_SCENE;
    int failures = 0;

    for (int id = 1; id <= ssc::kSuiteChecks; ++id) {
        const auto t0 = std::chrono::steady_clock::now();
        ssc::SuiteOptions options;
        options.only = {id};
        const auto outcomes = ssc::run_suite(options);
        const bool ok = outcomes.size() == 1 && outcomes[0].passed;
        failures += !ok;
        print(id, ok, outcomes.empty() ? "missing" : outcomes[0].name,
              outcomes.empty() ? "suite returned no outcome" : outcomes[0].detail, since(t0));
    }

    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        const auto scene = ssc::load_scene_file(scene_path);
        const auto first = ssc::report_csv(ssc::run_tasks(scene));
        const auto second = ssc::report_csv(ssc::run_tasks(scene));
        ok = first == second;
        detail = std::to_string(scene.spec.tasks.size()) + " tasks, " + std::to_string(first.size()) + " bytes, " +
                 (ok ? "identical" : "reports differ");
    } catch (const ssc::Error& e) {
        detail = e.what();
    }
    failures += !ok;
    print(9, ok, "golden scene report is byte-identical across runs", detail, since(t0));

    std::printf("%d of %d criteria passed\n", ssc::kSuiteChecks + 1 - failures, ssc::kSuiteChecks + 1);
    return failures == 0 ? 0 : 1;
}
