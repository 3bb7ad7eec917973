#include "adjbai/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace adjbai::io {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool parse_row(const std::string& line, std::vector<double>& row) {
    row.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const std::string t = trim(cell);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            return false;
        }
        if (used != t.size()) return false;
        row.push_back(v);
    }
    return !row.empty();
}

}  // namespace

ArmSet parse_arms_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    std::vector<double> row;
    bool first = true;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (!parse_row(line, row)) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw InvalidInput("CSV line " + std::to_string(line_no) + " is not numeric");
        }
        first = false;
        rows.push_back(row);
    }
    if (rows.empty()) throw InvalidInput("CSV contains no arms");
    return ArmSet::from_rows(rows);
}

namespace {

ArmSet arms_from_json(const json& j) {
    const json& arr = j.is_object() ? j.at("arms") : j;
    if (!arr.is_array()) throw InvalidInput("arm JSON must be an array of arrays");
    std::vector<std::vector<double>> rows;
    for (const auto& r : arr) rows.push_back(r.get<std::vector<double>>());
    return ArmSet::from_rows(rows);
}

}  // namespace

ArmSet parse_arms_json(const json& j) {
    try {
        return arms_from_json(j);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed arm JSON: ") + e.what());
    }
}

ArmSet load_arms(const std::string& path, ArmFormat format) {
    const std::string text = read_file(path);
    if (format == ArmFormat::guess) {
        const bool json_ext = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
        const std::string t = trim(text);
        format = json_ext || (!t.empty() && (t[0] == '[' || t[0] == '{')) ? ArmFormat::json : ArmFormat::csv;
    }
    if (format == ArmFormat::json) {
        try {
            return parse_arms_json(json::parse(text));
        } catch (const json::parse_error& e) {
            throw InvalidInput(path + ": " + e.what());
        }
    }
    return parse_arms_csv(text);
}

json to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from_json(const json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
    return rows;
}

json to_json(const ArmSet& arms) {
    json a = json::array();
    for (const auto& x : arms.arms()) a.push_back(to_json(x));
    return a;
}

json to_json(const geometry::AdjacencyStructure& adj) {
    json j;
    j["extreme"] = adj.extreme_points;
    json edges = json::array();
    json witnesses = json::object();
    for (const auto& [a, b] : adj.adjacent_pairs) {
        edges.push_back({a, b});
        const auto it = adj.edge_witness.find({a, b});
        if (it != adj.edge_witness.end()) {
            const double m = it->second.margin;
            witnesses[std::to_string(a) + "-" + std::to_string(b)] = {
                {"w", to_json(it->second.w)}, {"margin", std::isfinite(m) ? json(m) : json("inf")}};
        }
    }
    j["edges"] = edges;
    j["witnesses"] = witnesses;
    if (!adj.near_threshold_points.empty() || !adj.near_threshold_pairs.empty()) {
        json near_pairs = json::array();
        for (const auto& [a, b] : adj.near_threshold_pairs) near_pairs.push_back({a, b});
        j["near_threshold"] = {{"points", adj.near_threshold_points}, {"pairs", near_pairs}};
    }
    return j;
}

json to_json(const design::Design& d) {
    return {{"weights", d.weights},
            {"objective", d.objective},
            {"gap", d.duality_gap},
            {"iters", d.iterations},
            {"converged", d.converged},
            {"ridge_applied", d.ridge_applied}};
}

json to_json(const complexity::ComplexityReport& r) {
    json j = {{"d", r.d},
              {"min_gap", r.min_gap},
              {"h_g", r.h_g},
              {"h_adjacent", r.h_adjacent},
              {"ratio", r.ratio},
              {"adjacent_objective", r.adjacent_objective},
              {"solver_gap", r.solver_gap},
              {"deg", r.deg},
              {"deg_source", r.deg_from_instance ? "best_arm" : "max_degree"}};
    if (r.horizon) {
        j["T"] = *r.horizon;
        j["lower_bound"] = *r.lower_bound;
        j["upper_bound"] = *r.upper_bound;
    }
    return j;
}

std::string allocation_csv(const design::Allocation& alloc) {
    std::ostringstream out;
    out << "arm,count\n";
    for (std::size_t i = 0; i < alloc.counts.size(); ++i) out << i << ',' << alloc.counts[i] << '\n';
    return out.str();
}

json to_json(const instances::NonStationaryInstance& inst) {
    json j;
    j["arms"] = to_json(inst.arms());
    j["T"] = inst.horizon();
    if (inst.is_two_phase()) {
        j["phase1"] = to_json(inst.phase1());
        j["phase2"] = to_json(inst.phase2());
    } else {
        json t = json::array();
        for (const auto& th : inst.thetas()) t.push_back(to_json(th));
        j["theta"] = t;
    }
    j["noise"] = instances::to_string(inst.noise());
    if (inst.zero_noise()) j["zero_noise"] = true;
    return j;
}

namespace {

instances::NonStationaryInstance instance_from_json_unchecked(const json& j) {
    ArmSet arms = parse_arms_json(j.at("arms"));
    const auto noise = instances::noise_from_string(j.value("noise", std::string("gauss1")));
    const bool zero = j.value("zero_noise", false);
    if (j.contains("theta")) {
        std::vector<Vector> thetas;
        for (const auto& t : j.at("theta")) thetas.push_back(vector_from_json(t));
        if (j.contains("T") && j.at("T").get<int>() != static_cast<int>(thetas.size())) {
            throw InvalidInput("instance T disagrees with the theta sequence length");
        }
        return instances::NonStationaryInstance::explicit_form(std::move(arms), std::move(thetas), noise, zero);
    }
    return instances::NonStationaryInstance::two_phase(std::move(arms), j.at("T").get<int>(),
                                                       vector_from_json(j.at("phase1")),
                                                       vector_from_json(j.at("phase2")), noise, zero);
}

}  // namespace

instances::NonStationaryInstance instance_from_json(const json& j) {
    try {
        return instance_from_json_unchecked(j);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed instance JSON: ") + e.what());
    }
}

json to_json(const instances::HardInstancePair& hp) {
    return {{"pair", {hp.x, hp.x_prime}},
            {"gap", hp.gap},
            {"T", hp.instance_a.horizon()},
            {"lambda", hp.lambda_used},
            {"v_star", to_json(hp.v_star)},
            {"theta_star", to_json(hp.theta_star)},
            {"w", to_json(hp.w)},
            {"edge_margin", std::isfinite(hp.edge_margin) ? json(hp.edge_margin) : json("inf")},
            {"margin_recomputed", hp.margin_recomputed},
            {"alpha", hp.alpha},
            {"pair_norm_sq", hp.pair_norm_sq},
            {"objective", hp.objective},
            {"closed_form", hp.closed_form},
            {"max_theta_norm", hp.max_theta_norm},
            {"best_arm_a", hp.instance_a.best_arm()},
            {"best_arm_b", hp.instance_b.best_arm()}};
}

json to_json(const algorithms::BaiRun& run, bool correct) {
    return {{"chosen_arm", run.chosen_arm},
            {"correct", correct},
            {"estimator", to_json(run.estimator)},
            {"counts", run.allocation.counts},
            {"permutation", run.permutation},
            {"plays", run.plays},
            {"rewards", run.rewards},
            {"gram", matrix_to_json(run.gram)}};
}

}  // namespace adjbai::io
