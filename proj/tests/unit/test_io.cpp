#include "adjbai/io.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>

using namespace adjbai;
using nlohmann::json;

TEST_CASE("CSV arms") {
    const ArmSet a = io::parse_arms_csv("x,y\n1,0\n0,1\n-1,-1\n");
    CHECK(a.size() == 3);
    CHECK(a[2] == Vector{{-1.0, -1.0}});
    const ArmSet b = io::parse_arms_csv("1, 0\n0, 1\n\n");
    CHECK(b.size() == 2);
    CHECK_THROWS_AS(io::parse_arms_csv("1,0\n0,1,2\n"), InvalidInput);
    CHECK_THROWS_AS(io::parse_arms_csv("1,0\nfoo,1\n"), InvalidInput);
}

TEST_CASE("JSON arms") {
    CHECK(io::parse_arms_json(json::parse("[[1,0],[0,1]]")).size() == 2);
    CHECK(io::parse_arms_json(json::parse(R"({"arms": [[1,0,0],[0,1,0],[0,0,1]]})")).dim() == 3);
    CHECK_THROWS_AS(io::parse_arms_json(json::parse(R"({"x": 1})")), InvalidInput);
}

TEST_CASE("files") {
    const auto dir = std::filesystem::temp_directory_path() / "adjbai_io_test";
    std::filesystem::create_directories(dir);
    const auto csv = (dir / "a.csv").string();
    const auto js = (dir / "a.json").string();
    io::write_file(csv, "1,1\n-1,1\n-1,-1\n1,-1\n");
    io::write_file(js, "[[1,1],[-1,1],[-1,-1],[1,-1]]");
    CHECK(io::load_arms(csv).size() == 4);
    CHECK(io::load_arms(js).size() == 4);
    CHECK(io::load_arms(csv, io::ArmFormat::csv).size() == 4);
    CHECK_THROWS_AS(io::load_arms((dir / "missing.csv").string()), InvalidInput);
    std::filesystem::remove_all(dir);
}

TEST_CASE("adjacency JSON") {
    const auto adj = geometry::compute_adjacent_pairs(instances::square_set());
    const json j = io::to_json(adj);
    CHECK(j.at("extreme") == json({0, 1, 2, 3}));
    CHECK(j.at("edges").size() == 4);
    CHECK(j.at("witnesses").contains("0-1"));
    CHECK(j.at("witnesses").at("0-1").at("w").size() == 2);
    CHECK(j.at("witnesses").at("0-1").at("margin").get<double>() > 0.0);
}

TEST_CASE("design JSON") {
    const ArmSet arms = instances::basis_set(2);
    const json j = io::to_json(design::g_optimal(arms));
    CHECK(j.at("weights").size() == 2);
    CHECK(j.at("objective").get<double>() == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(j.contains("gap"));
    CHECK(j.contains("iters"));
}

TEST_CASE("instance round trip") {
    const ArmSet arms = instances::square_set();
    const auto tp = instances::NonStationaryInstance::two_phase(arms, 10, Vector{{0.2, 0.1}}, Vector{{0.4, 0.0}});
    const auto back = io::instance_from_json(io::to_json(tp));
    CHECK(back.horizon() == 10);
    CHECK(back.best_arm() == tp.best_arm());
    CHECK((back.theta_bar() - tp.theta_bar()).norm() < 1e-15);

    const auto ex = instances::NonStationaryInstance::explicit_form(arms, {Vector{{0.2, 0.1}}, Vector{{0.1, 0.0}}, Vector{{0.3, 0.3}}},
                                                                    instances::Noise::subgauss1);
    const auto back2 = io::instance_from_json(io::to_json(ex));
    CHECK(back2.horizon() == 3);
    CHECK(back2.noise() == instances::Noise::subgauss1);
    CHECK((back2.theta(2) - ex.theta(2)).norm() == 0.0);

    const json spec_form = {{"arms", {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}}, {"T", 4}, {"phase1", {0.5, 0}}, {"phase2", {0.5, 0.1}}, {"noise", "gauss1"}};
    CHECK(io::instance_from_json(spec_form).best_arm() == 0);
    CHECK_THROWS_AS(io::instance_from_json(json{{"arms", {{1, 0}, {0, 1}}}, {"T", 4}}), InvalidInput);
}

TEST_CASE("hard pair manifest") {
    const ArmSet arms = instances::square_set();
    const auto adj = geometry::compute_adjacent_pairs(arms);
    const auto hp = instances::construct_hard_pair(arms, adj, 0, 1, {0.25, 0.25, 0.25, 0.25}, 0.3, 10);
    const json j = io::to_json(hp);
    for (const char* key : {"v_star", "theta_star", "alpha", "objective"}) CHECK(j.contains(key));
}

TEST_CASE("allocation CSV") {
    const ArmSet arms = instances::basis_set(2);
    const auto alloc = design::round_design(arms, design::g_optimal(arms), design::arm_directions(arms), 10);
    const std::string csv = io::allocation_csv(alloc);
    CHECK(csv.find("0,5") != std::string::npos);
    CHECK(csv.find("1,5") != std::string::npos);
}

TEST_CASE("run audit") {
    const ArmSet arms = instances::square_set();
    const auto inst = instances::NonStationaryInstance::stationary(arms, 8, Vector{{0.5, 0.2}});
    Stream s(1);
    const auto run = algorithms::run_adjacent_bai(inst, s);
    const json j = io::to_json(run, run.chosen_arm == inst.best_arm());
    CHECK(j.contains("permutation"));
    CHECK(j.at("permutation").size() == 8);
    CHECK(j.at("rewards").size() == 8);
}
