#include "adjbai/acceptance.hpp"
#include "adjbai/algorithms.hpp"
#include "adjbai/complexity.hpp"
#include "adjbai/design.hpp"
#include "adjbai/geometry.hpp"
#include "adjbai/harness.hpp"
#include "adjbai/instances.hpp"
#include "adjbai/io.hpp"
#include "adjbai/random.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace adjbai;
using nlohmann::json;

namespace {

io::ArmFormat parse_format(const std::string& s) {
    if (s == "csv") return io::ArmFormat::csv;
    if (s == "json") return io::ArmFormat::json;
    return io::ArmFormat::guess;
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw InvalidInput("--pair expects i,j");
    return {std::stoul(s.substr(0, comma)), std::stoul(s.substr(comma + 1))};
}

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        io::write_file(out, j.dump(2) + "\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Best-arm identification in non-stationary linear bandits"};
    app.require_subcommand(1);

    std::string arms_path;
    std::string format = "guess";
    std::string out;

    auto* adjacency = app.add_subcommand("adjacency", "extreme points and edges of conv(X)");
    bool oracle_check = false;
    adjacency->add_option("--arms", arms_path)->required();
    adjacency->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "guess"}));
    adjacency->add_flag("--oracle-check", oracle_check, "compare with the 2-D hull oracle");
    adjacency->add_option("--out", out);

    auto* design_cmd = app.add_subcommand("design", "G-, XY- or adjacent-optimal design");
    std::string kind = "adjacent";
    double tol = 1e-4;
    std::optional<int> round_total;
    std::string counts_path;
    std::string method = "barrier";
    design_cmd->add_option("--arms", arms_path)->required();
    design_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "guess"}));
    design_cmd->add_option("--kind", kind)->check(CLI::IsMember({"g", "xy", "adjacent"}));
    design_cmd->add_option("--tol", tol)->check(CLI::PositiveNumber);
    design_cmd->add_option("--method", method)->check(CLI::IsMember({"barrier", "frank-wolfe"}));
    design_cmd->add_option("--round", round_total, "budget T for rounding");
    design_cmd->add_option("--counts", counts_path, "allocation CSV path (default: stdout after the JSON)");
    design_cmd->add_option("--out", out);

    auto* complexity_cmd = app.add_subcommand("complexity", "H_G, H_Adjacent and the error bounds");
    double gap = 0.0;
    std::optional<double> horizon_value;
    std::string theta_path;
    complexity_cmd->add_option("--arms", arms_path)->required();
    complexity_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "guess"}));
    complexity_cmd->add_option("--gap", gap)->required()->check(CLI::PositiveNumber);
    complexity_cmd->add_option("--T", horizon_value);
    complexity_cmd->add_option("--theta", theta_path, "JSON vector; fixes the best arm for deg");
    complexity_cmd->add_option("--out", out);

    auto* hardpair = app.add_subcommand("hardpair", "hard instance pair for an adjacent edge");
    std::string pair_text;
    int horizon = 0;
    std::string lambda_path;
    std::string out_dir = ".";
    hardpair->add_option("--arms", arms_path)->required();
    hardpair->add_option("--format", format)->check(CLI::IsMember({"csv", "json", "guess"}));
    hardpair->add_option("--pair", pair_text)->required();
    hardpair->add_option("--gap", gap)->required()->check(CLI::PositiveNumber);
    hardpair->add_option("--T", horizon)->required();
    hardpair->add_option("--lambda", lambda_path, "JSON weight vector (default: adjacent-optimal)");
    hardpair->add_option("--out-dir", out_dir);
    bool unit_regime = false;
    hardpair->add_flag("--unit-regime", unit_regime, "shrink the gap until every ||theta_t|| <= 1");

    auto* run = app.add_subcommand("run", "one trial of a BAI algorithm");
    std::string instance_path;
    std::string algo = "adjacent";
    std::uint64_t seed = 1;
    std::string audit_path;
    run->add_option("--instance", instance_path)->required();
    run->add_option("--algo", algo)->check(CLI::IsMember({"adjacent", "g"}));
    run->add_option("--seed", seed)->required();
    run->add_option("--audit", audit_path);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo error estimation over a spec");
    std::string spec_path;
    std::string csv_path;
    int jobs = 1;
    simulate->add_option("--spec", spec_path)->required();
    simulate->add_option("--out", out)->required();
    simulate->add_option("--csv", csv_path);
    simulate->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

    auto* accept = app.add_subcommand("accept", "acceptance suite");
    std::string workdir = "acceptance_out";
    acceptance::Options accept_opts;
    accept->add_option("--workdir", workdir);
    accept->add_flag("--reduced", accept_opts.reduced);
    accept->add_flag("--corrupt-rounding", accept_opts.corrupt_rounding);
    accept->add_option("--seed", accept_opts.seed);
    accept->add_option("--jobs", accept_opts.jobs)->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*adjacency) {
            const ArmSet arms = io::load_arms(arms_path, parse_format(format));
            const auto adj = geometry::compute_adjacent_pairs(arms);
            json j = io::to_json(adj);
            if (oracle_check) {
                const bool same = geometry::same_structure(adj, geometry::hull_oracle_2d(arms));
                j["oracle_match"] = same;
                emit(j, out);
                return same ? 0 : 1;
            }
            emit(j, out);
        } else if (*design_cmd) {
            const ArmSet arms = io::load_arms(arms_path, parse_format(format));
            design::SolverOptions opts;
            opts.tol = tol;
            opts.method = method == "barrier" ? design::SolverMethod::barrier : design::SolverMethod::frank_wolfe;
            const auto adj = geometry::compute_adjacent_pairs(arms);
            const design::Design des = kind == "g"    ? design::g_optimal(arms, opts)
                                       : kind == "xy" ? design::xy_optimal(arms, adj, opts)
                                                      : design::adjacent_optimal(arms, adj, opts);
            json j = io::to_json(des);
            j["kind"] = kind;
            std::string csv;
            if (round_total) {
                const auto guard = design::pair_directions(arms, adj.adjacent_pairs);
                const auto alloc = design::round_design(arms, des, guard, *round_total);
                j["allocation"] = {{"T", alloc.total}, {"counts", alloc.counts}, {"rounding_factor", alloc.rounding_factor}};
                csv = io::allocation_csv(alloc);
            }
            emit(j, out);
            if (!csv.empty()) {
                if (counts_path.empty()) {
                    std::cout << csv;
                } else {
                    io::write_file(counts_path, csv);
                }
            }
        } else if (*complexity_cmd) {
            const ArmSet arms = io::load_arms(arms_path, parse_format(format));
            const auto adj = geometry::compute_adjacent_pairs(arms);
            std::optional<std::size_t> best;
            if (!theta_path.empty()) {
                best = algorithms::argmax_arm(arms, io::vector_from_json(json::parse(io::read_file(theta_path))));
            }
            emit(io::to_json(complexity::complexity_report(arms, adj, gap, best, horizon_value)), out);
        } else if (*hardpair) {
            const ArmSet arms = io::load_arms(arms_path, parse_format(format));
            const auto adj = geometry::compute_adjacent_pairs(arms);
            const auto [x, xp] = parse_pair(pair_text);
            std::vector<double> lambda;
            if (lambda_path.empty()) {
                lambda = design::adjacent_optimal(arms, adj).weights;
            } else {
                lambda = json::parse(io::read_file(lambda_path)).get<std::vector<double>>();
            }
            const auto hp = unit_regime ? instances::construct_hard_pair_unit_regime(arms, adj, x, xp, lambda, gap, horizon)
                                        : instances::construct_hard_pair(arms, adj, x, xp, lambda, gap, horizon);
            fs::create_directories(out_dir);
            const fs::path dir(out_dir);
            io::write_file((dir / "instance_a.json").string(), io::to_json(hp.instance_a).dump(2) + "\n");
            io::write_file((dir / "instance_b.json").string(), io::to_json(hp.instance_b).dump(2) + "\n");
            json manifest = io::to_json(hp);
            manifest["files"] = {"instance_a.json", "instance_b.json"};
            io::write_file((dir / "pair_manifest.json").string(), manifest.dump(2) + "\n");
            std::cout << manifest.dump(2) << "\n";
        } else if (*run) {
            const auto inst = io::instance_from_json(json::parse(io::read_file(instance_path)));
            Stream stream = Stream::derive(seed, harness::cell_id(instance_path, algorithms::algorithm_from_string(algo),
                                                                  inst.horizon()),
                                           0);
            const auto result = algo == "adjacent" ? algorithms::run_adjacent_bai(inst, stream)
                                                   : algorithms::run_g_baseline(inst, stream);
            const bool correct = result.chosen_arm == inst.best_arm();
            std::cout << json{{"chosen_arm", result.chosen_arm}, {"best_arm", inst.best_arm()}, {"correct", correct}}.dump()
                      << "\n";
            if (!audit_path.empty()) io::write_file(audit_path, io::to_json(result, correct).dump(2) + "\n");
        } else if (*simulate) {
            const auto spec = harness::spec_from_json(json::parse(io::read_file(spec_path)),
                                                      fs::path(spec_path).parent_path().string());
            const auto report = harness::sweep(spec, jobs);
            io::write_file(out, harness::to_json(report).dump(2) + "\n");
            if (!csv_path.empty()) io::write_file(csv_path, harness::to_csv(report));
            int failed = 0;
            for (const auto& c : report.cells) failed += c.failed ? 1 : 0;
            std::cerr << report.cells.size() << " cells, " << failed << " failed\n";
        } else if (*accept) {
            int failures = 0;
            acceptance::acceptance_suite(workdir, accept_opts, [&](const acceptance::CriterionResult& r) {
                failures += r.pass ? 0 : 1;
                std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << "\n" << std::flush;
            });
            return failures == 0 ? 0 : 1;
        }
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
