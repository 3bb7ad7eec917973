#include "adjbai/design.hpp"
#include "adjbai/instances.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace adjbai;
using namespace adjbai::design;

namespace {

double sq(double v) { return v * v; }

}  // namespace

TEST_CASE("design matrix") {
    const ArmSet basis = instances::basis_set(2);
    CHECK((design_matrix(basis, {0.5, 0.5}) - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);
    const ArmSet c4 = instances::circle_set(4);
    CHECK((design_matrix(c4, {0.25, 0.25, 0.25, 0.25}) - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-15);
    const ArmSet arms = instances::random_polytope_set(3, 6, 1);
    std::vector<double> mass(6, 0.0);
    mass[4] = 1.0;
    CHECK((design_matrix(arms, mass) - arms[4] * arms[4].transpose()).norm() < 1e-15);
    CHECK_THROWS_AS(design_matrix(arms, {0.5, 0.5}), InvalidInput);
}

TEST_CASE("mahalanobis") {
    CHECK(mahalanobis_sq(Vector::Unit(3, 0), Matrix::Identity(3, 3)) == doctest::Approx(1.0));
    CHECK(mahalanobis_sq(Vector{{1.0, -1.0}}, 0.5 * Matrix::Identity(2, 2)) == doctest::Approx(4.0));
    for (int d = 2; d <= 5; ++d) {
        const Matrix a = design_matrix(instances::basis_set(d), std::vector<double>(d, 1.0 / d));
        CHECK(mahalanobis_sq(Vector::Unit(d, 0), a) == doctest::Approx(d));
    }
    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(mahalanobis_sq(Vector::Unit(2, 0), singular), SingularMatrix);
}

TEST_CASE("G-optimal design on the basis is uniform with value d") {
    for (int d = 2; d <= 6; ++d) {
        const Design g = g_optimal(instances::basis_set(d));
        CHECK(g.objective == doctest::Approx(d).epsilon(1e-4));
        for (double w : g.weights) CHECK(w == doctest::Approx(1.0 / d).epsilon(1e-3));
        CHECK(g.converged);
    }
}

TEST_CASE("single direction e1 - e2 on the basis matches a 1-D grid search") {
    double best = 1e300;
    for (int i = 1; i < 10000; ++i) {
        const double l = i / 10000.0;
        best = std::min(best, 1.0 / l + 1.0 / (1.0 - l));
    }
    const ArmSet basis = instances::basis_set(2);
    const Design d = minmax_design(basis, DirectionSet({Vector{{1.0, -1.0}}}));
    CHECK(d.objective == doctest::Approx(best).epsilon(1e-4));
    CHECK(d.objective == doctest::Approx(4.0).epsilon(1e-4));
    CHECK(d.weights[0] == doctest::Approx(0.5).epsilon(1e-3));
    const auto adj = geometry::compute_adjacent_pairs(basis);
    CHECK(adjacent_optimal(basis, adj).objective == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("circle adjacent designs reach the uniform value") {
    for (int k : {8, 16, 32, 64}) {
        const ArmSet arms = instances::circle_set(k);
        const Design d = adjacent_optimal(arms, geometry::compute_adjacent_pairs(arms));
        const double uniform = 8.0 * sq(std::sin(std::numbers::pi / k));
        CHECK(d.objective <= uniform * (1.0 + 1e-9));
        CHECK(d.objective == doctest::Approx(uniform).epsilon(1e-4));
    }
}

TEST_CASE("Kiefer-Wolfowitz check") {
    CHECK(kiefer_wolfowitz_check(instances::basis_set(3), 0.01).pass);
    const auto c12 = kiefer_wolfowitz_check(instances::circle_set(12), 0.01);
    CHECK(c12.pass);
    CHECK(c12.value == doctest::Approx(2.0).epsilon(1e-3));
    const auto r = kiefer_wolfowitz_check(instances::random_polytope_set(4, 20, 9), 0.01);
    CHECK(r.pass);
    CHECK(r.value == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("solver certificates") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int d = 2 + static_cast<int>(seed % 4);
        const ArmSet arms = instances::random_polytope_set(d, 8 + 2 * static_cast<int>(seed), seed + 40);
        const auto adj = geometry::compute_adjacent_pairs(arms);
        const std::vector<DirectionSet> sets = {arm_directions(arms), pair_directions(arms, extreme_pairs(adj)),
                                                pair_directions(arms, adj.adjacent_pairs)};
        for (const auto& dirs : sets) {
            const Design des = minmax_design(arms, dirs);
            CHECK(des.converged);
            CHECK(des.lower_bound <= des.objective + 1e-12);
            CHECK(des.duality_gap <= 1e-4 * des.objective + 1e-12);
            const double sum = std::accumulate(des.weights.begin(), des.weights.end(), 0.0);
            CHECK(sum == doctest::Approx(1.0));
            for (double w : des.weights) CHECK(w >= 0.0);
            CHECK(des.objective == doctest::Approx(max_variance(dirs, design_matrix(arms, des.weights))));
            // no other point on the simplex beats the certified lower bound
            const std::vector<double> uniform(arms.size(), 1.0 / static_cast<double>(arms.size()));
            CHECK(max_variance(dirs, design_matrix(arms, uniform)) >= des.lower_bound - 1e-12);
        }
    }
}

TEST_CASE("barrier and Frank-Wolfe agree") {
    SolverOptions fw;
    fw.method = SolverMethod::frank_wolfe;
    fw.tol = 1e-3;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const ArmSet arms = instances::random_polytope_set(2 + static_cast<int>(seed % 2), 8, seed + 70);
        const auto adj = geometry::compute_adjacent_pairs(arms);
        const Design a = g_optimal(arms);
        const Design b = g_optimal(arms, fw);
        CHECK(a.objective == doctest::Approx(b.objective).epsilon(2e-3));
        const Design c = adjacent_optimal(arms, adj);
        const Design e = adjacent_optimal(arms, adj, fw);
        CHECK(c.objective == doctest::Approx(e.objective).epsilon(2e-3));
    }
}

TEST_CASE("property: the adjacent objective never exceeds 4d") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const int d = 2 + static_cast<int>(seed % 5);
        const ArmSet arms = instances::random_polytope_set(d, d + 2 + static_cast<int>(seed), seed + 900);
        const Design ad = adjacent_optimal(arms, geometry::compute_adjacent_pairs(arms));
        CHECK(ad.objective <= 4.0 * d * (1.0 + 1e-4));
    }
}

TEST_CASE("direction set validation") {
    CHECK_THROWS_AS(DirectionSet(std::vector<Vector>{}), InvalidInput);
    CHECK_THROWS_AS(DirectionSet({Vector::Zero(2)}), InvalidInput);
    CHECK_THROWS_AS(DirectionSet({Vector::Unit(2, 0), Vector::Unit(3, 0)}), InvalidInput);
}

TEST_CASE("apportionment") {
    const auto even = apportion({0.25, 0.25, 0.25, 0.25}, 40);
    CHECK(even == std::vector<int>{10, 10, 10, 10});
    const auto odd = apportion({0.5, 0.5}, 101);
    CHECK(odd[0] + odd[1] == 101);
    CHECK(std::abs(odd[0] - odd[1]) == 1);
    const auto sparse = apportion({0.0, 0.7, 0.0, 0.3}, 10);
    CHECK(sparse[0] == 0);
    CHECK(sparse[2] == 0);
    CHECK(sparse[1] + sparse[3] == 10);
}

TEST_CASE("pruning and support reduction keep the design matrix") {
    CHECK(prune_weights({0.5, 1e-12, 0.5})[1] == 0.0);
    const ArmSet arms = instances::random_polytope_set(3, 30, 5);
    const std::vector<double> uniform(30, 1.0 / 30.0);
    const auto reduced = reduce_support(arms, uniform);
    const auto support = std::count_if(reduced.begin(), reduced.end(), [](double w) { return w > 0.0; });
    CHECK(support <= 7);
    CHECK((design_matrix(arms, reduced) - design_matrix(arms, uniform)).norm() < 1e-10);
    CHECK(std::accumulate(reduced.begin(), reduced.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("rounding") {
    SUBCASE("adjacent design on the square at T = 100") {
        const ArmSet sq4 = instances::square_set();
        const auto adj = geometry::compute_adjacent_pairs(sq4);
        const auto guard = pair_directions(sq4, adj.adjacent_pairs);
        const auto alloc = round_design(sq4, adjacent_optimal(sq4, adj), guard, 100);
        CHECK(std::accumulate(alloc.counts.begin(), alloc.counts.end(), 0) == 100);
        CHECK(alloc.rounding_factor <= 2.0);
        CHECK(allocation_sequence(alloc).size() == 100);
    }
    SUBCASE("uniform over the basis divides exactly") {
        const ArmSet basis = instances::basis_set(3);
        const auto alloc = round_design(basis, g_optimal(basis), arm_directions(basis), 27);
        CHECK(alloc.counts == std::vector<int>{9, 9, 9});
        CHECK(alloc.rounding_factor == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("budget below d^2 is rejected") {
        const ArmSet basis = instances::basis_set(3);
        CHECK_THROWS_AS(round_design(basis, g_optimal(basis), arm_directions(basis), 8), InvalidInput);
    }
    SUBCASE("a broken rule trips the factor guard") {
        const ArmSet c8 = instances::circle_set(8);
        const auto adj = geometry::compute_adjacent_pairs(c8);
        const Apportioner greedy = [](const std::vector<double>& w, int total) {
            std::vector<int> n(w.size(), 0);
            n[0] = total - 1;
            n[2] = 1;
            return n;
        };
        CHECK_THROWS_AS(round_design(c8, adjacent_optimal(c8, adj), pair_directions(c8, adj.adjacent_pairs), 64, greedy),
                        NumericalFailure);
    }
}

TEST_CASE("property: rounding factor at most 2 for T in {d^2, 4d^2, 100d^2}") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int d = 2 + static_cast<int>(seed % 5);
        const ArmSet arms = instances::random_polytope_set(d, 3 * d, seed + 300);
        const auto adj = geometry::compute_adjacent_pairs(arms);
        const auto guard = pair_directions(arms, adj.adjacent_pairs);
        for (const Design& des : {g_optimal(arms), adjacent_optimal(arms, adj)}) {
            for (int t : {d * d, 4 * d * d, 100 * d * d}) {
                const auto alloc = round_design(arms, des, guard, t);
                CHECK(alloc.rounding_factor <= 2.0);
                CHECK(alloc.total == t);
            }
        }
    }
}

TEST_CASE("objective traces never increase") {
    const ArmSet arms = instances::random_polytope_set(3, 12, 17);
    SolverOptions fw;
    fw.method = SolverMethod::frank_wolfe;
    for (const Design& des : {g_optimal(arms), g_optimal(arms, fw)}) {
        REQUIRE_FALSE(des.objective_trace.empty());
        for (std::size_t i = 1; i < des.objective_trace.size(); ++i) {
            CHECK(des.objective_trace[i] <= des.objective_trace[i - 1]);
        }
    }
}

TEST_CASE("property: adjacent objective at most the XY objective") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ArmSet arms = instances::random_polytope_set(2 + static_cast<int>(seed % 3), 9, seed + 210);
        const auto adj = geometry::compute_adjacent_pairs(arms);
        const Design xy = xy_optimal(arms, adj);
        const Design ad = adjacent_optimal(arms, adj);
        CHECK(ad.objective <= xy.objective * (1.0 + 1e-4));
    }
}

TEST_CASE("property: scaling arms by c scales objectives by 1/c^2") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const ArmSet arms = instances::random_polytope_set(3, 10, seed + 600);
        std::vector<Vector> scaled;
        for (const auto& a : arms.arms()) scaled.push_back(2.5 * a);
        const ArmSet big(scaled);
        const auto adj = geometry::compute_adjacent_pairs(arms);
        const auto adj_big = geometry::compute_adjacent_pairs(big);
        CHECK(adj.adjacent_pairs == adj_big.adjacent_pairs);
        // arm directions: variance is scale free; difference directions: also scale free
        CHECK(g_optimal(big).objective == doctest::Approx(g_optimal(arms).objective).epsilon(2e-4));
        CHECK(adjacent_optimal(big, adj_big).objective ==
              doctest::Approx(adjacent_optimal(arms, adj).objective).epsilon(2e-4));
        // fixed directions against scaled arms
        const DirectionSet e1({Vector::Unit(3, 0)});
        CHECK(minmax_design(big, e1).objective == doctest::Approx(minmax_design(arms, e1).objective / 6.25).epsilon(2e-4));
    }
}
