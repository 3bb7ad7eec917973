#include "adjbai/geometry.hpp"
#include "adjbai/instances.hpp"

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

using namespace adjbai;
using namespace adjbai::geometry;

namespace {

ArmSet rows(std::vector<std::vector<double>> r) { return ArmSet::from_rows(r); }

std::vector<ArmPair> consecutive(std::size_t k) {
    std::vector<ArmPair> out;
    for (std::size_t i = 0; i < k; ++i) out.push_back(make_pair_sorted(i, (i + 1) % k));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("centering") {
    const auto c = center_arm_set(rows({{0, 0}, {2, 0}, {0, 2}}));
    CHECK(c.centroid(0) == doctest::Approx(2.0 / 3.0));
    CHECK(c.centroid(1) == doctest::Approx(2.0 / 3.0));
    Vector sum = Vector::Zero(2);
    for (const auto& a : c.arms) sum += a;
    CHECK(sum.norm() < 1e-12);

    const auto same = center_arm_set(rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
    CHECK(same.centroid.norm() < 1e-15);
    CHECK(same.arms[0] == Vector{{1.0, 0.0}});

    const auto b = center_arm_set(instances::basis_set(3));
    CHECK((b.centroid - Vector::Constant(3, 1.0 / 3.0)).norm() < 1e-15);
}

TEST_CASE("LP1 on the square gives a positive margin and a valid witness") {
    const auto c = center_arm_set(instances::square_set());
    const auto lp = extreme_point_program(c.arms, 0);
    const auto r = solve_lp(lp);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.value > kTolMargin);
    const Vector w = r.solution.head(2);
    CHECK(c.arms[0].dot(w) == doctest::Approx(1.0));
    for (std::size_t y = 1; y < c.arms.size(); ++y) CHECK(c.arms[y].dot(w) <= 1.0 - r.value + 1e-12);
}

TEST_CASE("extreme points") {
    SUBCASE("edge midpoint is dropped") {
        const auto v = compute_extreme_points(rows({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {1, 0}}));
        CHECK(v == std::vector<std::size_t>{0, 1, 2, 3});
    }
    SUBCASE("interior point is dropped") {
        const auto v = compute_extreme_points(rows({{1, 1}, {-1, 1}, {0, 0}, {-1, -1}, {1, -1}}));
        CHECK(v == std::vector<std::size_t>{0, 1, 3, 4});
    }
    SUBCASE("basis vectors are all extreme") {
        for (int d = 2; d <= 6; ++d) CHECK(compute_extreme_points(instances::basis_set(d)).size() == static_cast<std::size_t>(d));
    }
}

TEST_CASE("adjacent pairs") {
    SUBCASE("square: sides, no diagonals") {
        const auto adj = compute_adjacent_pairs(instances::square_set());
        CHECK(adj.adjacent_pairs.size() == 4);
        CHECK_FALSE(adj.is_adjacent(0, 2));
        CHECK_FALSE(adj.is_adjacent(1, 3));
        CHECK(adj.is_adjacent(0, 1));
        CHECK(adj.is_adjacent(3, 0));
    }
    SUBCASE("simplex: every pair") {
        const auto adj = compute_adjacent_pairs(instances::basis_set(3));
        CHECK(adj.adjacent_pairs == std::vector<ArmPair>{{0, 1}, {0, 2}, {1, 2}});
    }
    SUBCASE("circles: consecutive neighbours") {
        for (int k : {8, 16, 32}) {
            const auto adj = compute_adjacent_pairs(instances::circle_set(k));
            CHECK(adj.adjacent_pairs == consecutive(static_cast<std::size_t>(k)));
            CHECK(adj.max_degree() == 2);
        }
    }
    SUBCASE("two-arm set: the segment itself") {
        const auto adj = compute_adjacent_pairs(rows({{1, 0}, {0, 1}}));
        REQUIRE(adj.adjacent_pairs.size() == 1);
        CHECK(std::isinf(adj.edge_witness.at({0, 1}).margin));
    }
    SUBCASE("cube: 12 edges, degree 3") {
        std::vector<std::vector<double>> cube;
        for (int i = 0; i < 8; ++i) cube.push_back({i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0});
        const auto adj = compute_adjacent_pairs(rows(cube));
        CHECK(adj.adjacent_pairs.size() == 12);
        for (auto [a, b] : adj.adjacent_pairs) CHECK(std::popcount(static_cast<unsigned>(a ^ b)) == 1);
        CHECK(adj.max_degree() == 3);
    }
    SUBCASE("cross-polytope in R^3: 12 edges, antipodes not adjacent") {
        std::vector<std::vector<double>> oct = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        const auto adj = compute_adjacent_pairs(rows(oct));
        CHECK(adj.adjacent_pairs.size() == 12);
        CHECK_FALSE(adj.is_adjacent(0, 1));
        CHECK_FALSE(adj.is_adjacent(2, 3));
    }
}

TEST_CASE("edge witnesses satisfy their definition") {
    const ArmSet arms = instances::random_polytope_set(3, 15, 3);
    const auto adj = compute_adjacent_pairs(arms);
    const auto c = center_arm_set(arms);
    for (const auto& [pair, wit] : adj.edge_witness) {
        CHECK(c.arms[pair.first].dot(wit.w) == doctest::Approx(1.0));
        CHECK(c.arms[pair.second].dot(wit.w) == doctest::Approx(1.0));
        CHECK(wit.margin > kTolMargin);
        for (std::size_t y : adj.extreme_points) {
            if (y != pair.first && y != pair.second) CHECK(c.arms[y].dot(wit.w) <= 1.0 - wit.margin + 1e-9);
        }
    }
}

TEST_CASE("2-D hull oracle") {
    CHECK(same_structure(compute_adjacent_pairs(instances::square_set()), hull_oracle_2d(instances::square_set())));
    const auto c16 = hull_oracle_2d(instances::circle_set(16));
    CHECK(c16.adjacent_pairs == consecutive(16));
    CHECK(hull_oracle_2d(rows({{0, 0}, {1, 0}, {0, 1}})).adjacent_pairs.size() == 3);
    CHECK_THROWS_AS(hull_oracle_2d(instances::basis_set(3)), InvalidInput);
}

TEST_CASE("property: LP adjacency matches the hull oracle on random planar sets") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        const ArmSet arms = instances::random_polytope_set(2, 3 + static_cast<int>(seed % 25), seed);
        const auto lp = compute_adjacent_pairs(arms);
        CHECK(same_structure(lp, hull_oracle_2d(arms)));
        CHECK(skeleton_connected(lp));
    }
}

TEST_CASE("property: edges are pairs of extreme points and the skeleton is connected") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const int d = 3 + static_cast<int>(seed % 3);
        const auto adj = compute_adjacent_pairs(instances::random_polytope_set(d, 10 + static_cast<int>(seed), seed));
        for (auto [a, b] : adj.adjacent_pairs) {
            CHECK(a < b);
            CHECK(std::binary_search(adj.extreme_points.begin(), adj.extreme_points.end(), a));
            CHECK(std::binary_search(adj.extreme_points.begin(), adj.extreme_points.end(), b));
        }
        CHECK(skeleton_connected(adj));
        // every vertex of a d-polytope has at least d neighbours
        for (std::size_t v : adj.extreme_points) CHECK(adj.neighbors_of(v).size() >= static_cast<std::size_t>(d));
    }
}

TEST_CASE("a vertex beaten anywhere is beaten by a neighbour") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int d = 2 + static_cast<int>(seed % 4);
        const ArmSet arms = instances::random_polytope_set(d, d + 4 + static_cast<int>(seed % 10), seed + 500);
        const auto adj = compute_adjacent_pairs(arms);
        const Vector theta = Vector::NullaryExpr(d, [&] { return n(rng); });
        for (std::size_t x : adj.extreme_points) {
            bool any = false, near = false;
            for (std::size_t y = 0; y < arms.size(); ++y) any = any || (arms[y] - arms[x]).dot(theta) > 0;
            for (std::size_t y : adj.neighbors_of(x)) near = near || (arms[y] - arms[x]).dot(theta) > 0;
            CHECK(any == near);
        }
    }
}

TEST_CASE("largest minor detects dependence") {
    CHECK(largest_minor(Vector{{1.0, 2.0, 3.0}}, Vector{{2.0, 4.0, 6.0}}) < kPairIndependenceTol);
    CHECK(largest_minor(Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}}) == doctest::Approx(1.0));
}

TEST_CASE("arm set validation") {
    CHECK_THROWS_AS(rows({{1, 0}}), InvalidInput);
    CHECK_THROWS_AS(rows({{1, 0}, {2, 0}}), InvalidInput);
    CHECK_THROWS_AS(rows({{1, 0}, {0, 1, 2}}), InvalidInput);
    const ArmSet dup = rows({{1, 0}, {0, 1}, {1, 0}});
    CHECK(dup.size() == 2);
    CHECK(dup.duplicates_dropped() == 1);
}

TEST_CASE("centering is idempotent") {
    const auto once = center_arm_set(instances::random_polytope_set(3, 9, 2));
    const auto twice = center_arm_set(once.arms);
    CHECK(twice.centroid.norm() < 1e-15);
    for (std::size_t i = 0; i < once.arms.size(); ++i) CHECK((once.arms[i] - twice.arms[i]).norm() < 1e-15);
}

TEST_CASE("argmax arm is a vertex beating all its neighbours") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int d = 2 + static_cast<int>(seed % 3);
        const ArmSet arms = instances::random_polytope_set(d, 12, seed + 800);
        const auto adj = compute_adjacent_pairs(arms);
        const Vector theta = Vector::NullaryExpr(d, [&] { return n(rng); });
        std::size_t best = 0;
        for (std::size_t i = 1; i < arms.size(); ++i) if (arms[i].dot(theta) > arms[best].dot(theta)) best = i;
        CHECK(std::binary_search(adj.extreme_points.begin(), adj.extreme_points.end(), best));
        for (std::size_t z : adj.neighbors_of(best)) CHECK(arms[z].dot(theta) < arms[best].dot(theta));
    }
}
