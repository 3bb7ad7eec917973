#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace adjbai::acceptance {

struct Options {
    bool reduced = false;           // 2000 Monte Carlo trials instead of 10^4
    bool corrupt_rounding = false;  // fault injection: broken apportionment in the rounding criterion
    std::uint64_t seed = 20240611;
    int jobs = 1;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string tolerance;
    nlohmann::json values;
    double seconds = 0.0;
};

inline constexpr int kCriterionCount = 11;

/// Runs one criterion (1..11). Failures are reported, never thrown.
CriterionResult run_criterion(int id, const Options& opts);

/// Runs every criterion in order, calling on_result after each, and writes
/// manifest.json into workdir (created if missing) when workdir is non-empty.
std::vector<CriterionResult> acceptance_suite(const std::string& workdir, const Options& opts,
                                              const std::function<void(const CriterionResult&)>& on_result = {});

nlohmann::json manifest(const std::vector<CriterionResult>& results, const Options& opts);

}  // namespace adjbai::acceptance
