#pragma once

#include "adjbai/algorithms.hpp"
#include "adjbai/instances.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace adjbai::harness {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double half_width() const { return 0.5 * (hi - lo); }
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// Wilson score interval for errors / trials.
Interval wilson_interval(std::size_t errors, std::size_t trials, double z = kZ95);

struct CellReport {
    std::string instance;
    algorithms::Algorithm algo = algorithms::Algorithm::adjacent;
    int horizon = 0;
    std::size_t trials = 0;
    std::size_t errors = 0;
    double rate = 0.0;
    Interval wilson;
    double bound_lower = 0.0;
    double bound_upper = 0.0;
    double h_adjacent = 0.0;
    double min_gap = 0.0;
    std::size_t deg = 0;
    double seconds = 0.0;
    bool failed = false;
    std::string error;
};

/// Identifies the cell in stream derivation.
std::uint64_t cell_id(const std::string& instance, algorithms::Algorithm algo, int horizon);

/// Runs `trials` independent trials; trial i uses Stream::derive(base_seed,
/// cell_id(...), i), so counts do not depend on `jobs`. Errors raised by a
/// run mark the cell failed.
CellReport estimate_error(const std::string& name, const instances::NonStationaryInstance& inst,
                          algorithms::Algorithm algo, std::size_t trials, std::uint64_t base_seed,
                          int jobs = 1, const design::SolverOptions& opts = {});

/// Same, with a prebuilt plan for the instance's arms and horizon.
CellReport estimate_error(const std::string& name, const instances::NonStationaryInstance& inst,
                          const algorithms::BaiPlan& plan, std::size_t trials, std::uint64_t base_seed,
                          int jobs = 1, const design::SolverOptions& opts = {});

struct NamedInstance {
    std::string name;
    instances::NonStationaryInstance instance;
};

struct ExperimentSpec {
    std::vector<NamedInstance> instances;
    std::vector<algorithms::Algorithm> algorithms;
    std::vector<int> horizons;  // empty: each instance's own horizon
    std::size_t trials = 1000;
    std::uint64_t base_seed = 1;

    /// Throws InvalidInput when trials < 100 or a budget is invalid.
    void validate() const;
};

/// Reads a spec; paths in "file" / "arms_file" entries are resolved
/// relative to base_dir.
ExperimentSpec spec_from_json(const nlohmann::json& j, const std::string& base_dir = ".");

struct TrialReport {
    std::uint64_t base_seed = 0;
    std::vector<CellReport> cells;
};

/// Evaluates every (instance, algorithm, T) cell, `jobs` cells at a time.
TrialReport sweep(const ExperimentSpec& spec, int jobs = 1, const design::SolverOptions& opts = {});

nlohmann::json to_json(const CellReport& c);
nlohmann::json to_json(const TrialReport& r);
std::string to_csv(const TrialReport& r);

}  // namespace adjbai::harness
