#include "adjbai/harness.hpp"

#include "adjbai/complexity.hpp"
#include "adjbai/io.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace adjbai::harness {

using nlohmann::json;

Interval wilson_interval(std::size_t errors, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    if (errors > trials) throw InvalidInput("more errors than trials");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {errors == 0 ? 0.0 : std::max(0.0, centre - half), errors == trials ? 1.0 : std::min(1.0, centre + half)};
}

std::uint64_t cell_id(const std::string& instance, algorithms::Algorithm algo, int horizon) {
    return stable_hash(instance + "|" + algorithms::to_string(algo) + "|" + std::to_string(horizon));
}

CellReport estimate_error(const std::string& name, const instances::NonStationaryInstance& inst,
                          const algorithms::BaiPlan& plan, std::size_t trials, std::uint64_t base_seed, int jobs,
                          const design::SolverOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    CellReport c;
    c.instance = name;
    c.algo = plan.algorithm;
    c.horizon = inst.horizon();
    c.trials = trials;
    c.min_gap = inst.min_gap();
    try {
        const double adjacent_objective = plan.algorithm == algorithms::Algorithm::adjacent
                                              ? plan.design.objective
                                              : design::adjacent_optimal(inst.arms(), plan.adjacency, opts).objective;
        c.h_adjacent = adjacent_objective / (c.min_gap * c.min_gap);
        c.deg = plan.adjacency.neighbors_of(inst.best_arm()).size();
        c.bound_lower = complexity::lower_bound_value(c.h_adjacent, c.horizon);
        c.bound_upper = complexity::upper_bound_value(c.h_adjacent, c.horizon, std::max<std::size_t>(c.deg, 1));
    } catch (const std::exception& e) {
        c.failed = true;
        c.error = e.what();
        return c;
    }

    const std::uint64_t id = cell_id(name, plan.algorithm, c.horizon);
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(trials)));
    std::vector<std::size_t> errors(static_cast<std::size_t>(workers), 0);
    std::mutex failure_lock;
    std::string failure;
    auto work = [&](int w) {
        try {
            for (std::size_t i = static_cast<std::size_t>(w); i < trials; i += static_cast<std::size_t>(workers)) {
                Stream stream = Stream::derive(base_seed, id, i);
                const algorithms::BaiRun run = algorithms::execute(plan, inst, stream);
                if (run.chosen_arm != inst.best_arm()) ++errors[static_cast<std::size_t>(w)];
            }
        } catch (const std::exception& e) {
            const std::lock_guard<std::mutex> lock(failure_lock);
            if (failure.empty()) failure = e.what();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    if (!failure.empty()) {
        c.failed = true;
        c.error = failure;
    }
    for (std::size_t e : errors) c.errors += e;
    c.rate = trials == 0 ? 0.0 : static_cast<double>(c.errors) / static_cast<double>(trials);
    c.wilson = wilson_interval(c.errors, trials);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

CellReport estimate_error(const std::string& name, const instances::NonStationaryInstance& inst,
                          algorithms::Algorithm algo, std::size_t trials, std::uint64_t base_seed, int jobs,
                          const design::SolverOptions& opts) {
    algorithms::BaiPlan plan;
    try {
        plan = algorithms::make_plan(algo, inst.arms(), inst.horizon(), opts);
    } catch (const std::exception& e) {
        CellReport c;
        c.instance = name;
        c.algo = algo;
        c.horizon = inst.horizon();
        c.trials = trials;
        c.failed = true;
        c.error = e.what();
        return c;
    }
    return estimate_error(name, inst, plan, trials, base_seed, jobs, opts);
}

void ExperimentSpec::validate() const {
    if (trials < 100) throw InvalidInput("an experiment needs at least 100 trials per cell");
    if (instances.empty()) throw InvalidInput("experiment has no instances");
    if (algorithms.empty()) throw InvalidInput("experiment has no algorithms");
    for (const auto& ni : instances) {
        const int d2 = ni.instance.arms().dim() * ni.instance.arms().dim();
        const std::vector<int> grid = horizons.empty() ? std::vector<int>{ni.instance.horizon()} : horizons;
        for (int t : grid) {
            if (t < d2) throw InvalidInput("budget " + std::to_string(t) + " is below d^2 for " + ni.name);
            if (ni.instance.is_two_phase() && t % 2 != 0) {
                throw InvalidInput("budget " + std::to_string(t) + " is odd for two-phase instance " + ni.name);
            }
        }
    }
}

namespace {

std::string resolve(const std::string& base, const std::string& path) {
    const std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

ArmSet arms_entry(const json& e, const std::string& base) {
    if (e.contains("arms_file")) return io::load_arms(resolve(base, e.at("arms_file").get<std::string>()));
    return io::parse_arms_json(e.at("arms"));
}

}  // namespace

namespace {

ExperimentSpec spec_from_json_unchecked(const json& j, const std::string& base_dir) {
    ExperimentSpec spec;
    if (j.contains("schema") && j.at("schema").get<int>() != 1) throw InvalidInput("unsupported spec schema");
    spec.trials = j.value("trials", std::size_t{1000});
    spec.base_seed = j.value("seed", std::uint64_t{1});
    if (j.contains("T")) spec.horizons = j.at("T").get<std::vector<int>>();
    for (const auto& a : j.at("algorithms")) spec.algorithms.push_back(algorithms::algorithm_from_string(a));
    for (const auto& e : j.at("instances")) {
        const std::string name = e.at("name").get<std::string>();
        if (e.contains("file")) {
            const json inst = json::parse(io::read_file(resolve(base_dir, e.at("file").get<std::string>())));
            spec.instances.push_back({name, io::instance_from_json(inst)});
        } else if (e.contains("instance")) {
            spec.instances.push_back({name, io::instance_from_json(e.at("instance"))});
        } else if (e.contains("hard_pair")) {
            const json& h = e.at("hard_pair");
            const ArmSet arms = arms_entry(h, base_dir);
            const auto adj = geometry::compute_adjacent_pairs(arms);
            const auto pair = h.at("pair").get<std::vector<std::size_t>>();
            if (pair.size() != 2) throw InvalidInput("hard_pair.pair must have two indices");
            std::vector<double> lambda;
            const json lam = h.value("lambda", json("adjacent"));
            if (lam.is_string() && lam.get<std::string>() == "adjacent") {
                lambda = design::adjacent_optimal(arms, adj).weights;
            } else if (lam.is_string() && lam.get<std::string>() == "uniform") {
                lambda.assign(arms.size(), 1.0 / static_cast<double>(arms.size()));
            } else {
                lambda = lam.get<std::vector<double>>();
            }
            const int horizon = h.value("T", spec.horizons.empty() ? 2 * arms.dim() * arms.dim() : spec.horizons.front());
            const double gap = h.at("gap").get<double>();
            const int even = horizon + horizon % 2;
            const auto hp = h.value("unit_regime", false)
                                ? instances::construct_hard_pair_unit_regime(arms, adj, pair[0], pair[1], lambda, gap, even)
                                : instances::construct_hard_pair(arms, adj, pair[0], pair[1], lambda, gap, even);
            spec.instances.push_back({name + "/a", hp.instance_a});
            spec.instances.push_back({name + "/b", hp.instance_b});
        } else {
            throw InvalidInput("instance entry '" + name + "' needs file, instance or hard_pair");
        }
    }
    spec.validate();
    return spec;
}

}  // namespace

ExperimentSpec spec_from_json(const json& j, const std::string& base_dir) {
    try {
        return spec_from_json_unchecked(j, base_dir);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed experiment spec: ") + e.what());
    }
}

TrialReport sweep(const ExperimentSpec& spec, int jobs, const design::SolverOptions& opts) {
    spec.validate();
    struct Job {
        std::string name;
        const instances::NonStationaryInstance* base;
        algorithms::Algorithm algo;
        int horizon;
    };
    std::vector<Job> cells;
    for (const auto& ni : spec.instances) {
        const std::vector<int> grid = spec.horizons.empty() ? std::vector<int>{ni.instance.horizon()} : spec.horizons;
        for (int t : grid) {
            for (auto a : spec.algorithms) cells.push_back({ni.name, &ni.instance, a, t});
        }
    }

    TrialReport report;
    report.base_seed = spec.base_seed;
    report.cells.resize(cells.size());

    // Plans are trial-independent; share one per (arms, T, algorithm).
    std::map<std::string, std::shared_ptr<algorithms::BaiPlan>> plans;
    std::map<std::string, std::string> plan_errors;
    std::vector<std::string> keys(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const Job& c = cells[i];
        keys[i] = io::to_json(c.base->arms()).dump() + "|" + std::to_string(c.horizon) + "|" +
                  algorithms::to_string(c.algo);
        if (plans.count(keys[i]) || plan_errors.count(keys[i])) continue;
        try {
            plans[keys[i]] = std::make_shared<algorithms::BaiPlan>(
                algorithms::make_plan(c.algo, c.base->arms(), c.horizon, opts));
        } catch (const std::exception& e) {
            plan_errors[keys[i]] = e.what();
        }
    }

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Job& c = cells[i];
            CellReport& out = report.cells[i];
            out.instance = c.name;
            out.algo = c.algo;
            out.horizon = c.horizon;
            out.trials = spec.trials;
            if (plan_errors.count(keys[i])) {
                out.failed = true;
                out.error = plan_errors[keys[i]];
                continue;
            }
            try {
                const instances::NonStationaryInstance inst =
                    c.horizon == c.base->horizon() ? *c.base : c.base->with_horizon(c.horizon);
                out = estimate_error(c.name, inst, *plans.at(keys[i]), spec.trials, spec.base_seed, 1, opts);
            } catch (const std::exception& e) {
                out.failed = true;
                out.error = e.what();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return report;
}

json to_json(const CellReport& c) {
    json j = {{"instance", c.instance},
              {"algo", algorithms::to_string(c.algo)},
              {"T", c.horizon},
              {"trials", c.trials},
              {"errors", c.errors},
              {"rate", c.rate},
              {"lo95", c.wilson.lo},
              {"hi95", c.wilson.hi},
              {"bound_lower", c.bound_lower},
              {"bound_upper", c.bound_upper},
              {"h_adjacent", c.h_adjacent},
              {"min_gap", c.min_gap},
              {"deg", c.deg},
              {"seconds", c.seconds},
              {"status", c.failed ? "failed" : "ok"}};
    if (c.failed) j["error"] = c.error;
    return j;
}

json to_json(const TrialReport& r) {
    json cells = json::array();
    for (const auto& c : r.cells) cells.push_back(to_json(c));
    return {{"schema", 1}, {"base_seed", r.base_seed}, {"generator", Stream::kGenerator}, {"cells", cells}};
}

std::string to_csv(const TrialReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "instance,algo,T,trials,errors,rate,lo95,hi95,bound_lower,bound_upper,seconds\n";
    for (const auto& c : r.cells) {
        out << c.instance << ',' << algorithms::to_string(c.algo) << ',' << c.horizon << ',' << c.trials << ','
            << c.errors << ',' << c.rate << ',' << c.wilson.lo << ',' << c.wilson.hi << ',' << c.bound_lower << ','
            << c.bound_upper << ',' << c.seconds << '\n';
    }
    return out.str();
}

}  // namespace adjbai::harness
