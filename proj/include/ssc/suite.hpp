#pragma once

// Property suite over randomly generated ball products, unions, component
// indicators and finite-coordinate functions. Each check draws from its own
// seeded stream, so outcomes depend only on the options.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace ssc {

struct SuiteOptions {
    std::uint64_t seed = 20240601;
    double scale = 1.0;  // multiplies every sample count (each stays >= 1)
    std::set<int> only;  // empty runs every check
};

struct CheckOutcome {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

inline constexpr int kSuiteChecks = 8;

std::vector<CheckOutcome> run_suite(const SuiteOptions& options);

}  // namespace ssc
