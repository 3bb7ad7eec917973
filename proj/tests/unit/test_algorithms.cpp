#include "adjbai/algorithms.hpp"
#include "adjbai/instances.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <random>

using namespace adjbai;
using namespace adjbai::algorithms;

TEST_CASE("permutations") {
    Stream s(1);
    CHECK(sample_permutation(1, s) == std::vector<std::size_t>{0});
    Stream a(9), b(9);
    CHECK(sample_permutation(50, a) == sample_permutation(50, b));
    auto p = sample_permutation(50, a);
    std::sort(p.begin(), p.end());
    for (std::size_t i = 0; i < 50; ++i) CHECK(p[i] == i);
}

TEST_CASE("permutations of three are uniform (chi-square)") {
    Stream s(2024);
    std::map<std::vector<std::size_t>, int> counts;
    const int n = 60000;
    for (int i = 0; i < n; ++i) ++counts[sample_permutation(3, s)];
    REQUIRE(counts.size() == 6);
    double chi2 = 0.0;
    for (const auto& [perm, c] : counts) {
        const double e = n / 6.0;
        chi2 += (c - e) * (c - e) / e;
        CHECK(std::abs(c - e) <= 3.0 * std::sqrt(n * (1.0 / 6.0) * (5.0 / 6.0)));
    }
    CHECK(chi2 < 20.52);  // 0.999 quantile, 5 degrees of freedom
}

TEST_CASE("least squares") {
    SUBCASE("distinct basis plays") {
        const ArmSet basis = instances::basis_set(3);
        const Matrix plays = basis.as_matrix();
        const Vector r{{0.5, -1.0, 2.0}};
        const Matrix gram = plays.transpose() * plays;
        CHECK((least_squares(gram, plays, r) - r).norm() < 1e-14);
        Matrix twice(6, 3);
        twice << plays, plays;
        Vector r2(6);
        r2 << r, r;
        CHECK((least_squares(twice.transpose() * twice, twice, r2) - r).norm() < 1e-14);
    }
    SUBCASE("normal equations agree with QR") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n;
        for (int k = 0; k < 10; ++k) {
            const Matrix x = Matrix::NullaryExpr(40, 4, [&] { return n(rng); });
            const Vector y = Vector::NullaryExpr(40, [&] { return n(rng); });
            const Vector a = least_squares(Matrix(x.transpose() * x), x, y);
            CHECK((a - least_squares_qr(x, y)).norm() < 1e-8);
        }
    }
    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(least_squares(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Vector::Zero(3)), InvalidInput);
    }
}

TEST_CASE("argmax ties go to the lowest index") {
    const ArmSet sq = instances::square_set();
    CHECK(argmax_arm(sq, Vector{{0.0, 1.0}}) == 0);
    CHECK(argmax_arm(sq, Vector{{-1.0, 0.0}}) == 1);
    CHECK(argmax_arm(sq, Vector{{0.2, -1.0}}) == 3);
}

TEST_CASE("plans") {
    const ArmSet basis = instances::basis_set(3);
    const auto g = make_plan(Algorithm::g, basis, 30);
    CHECK(g.allocation.counts == std::vector<int>{10, 10, 10});
    CHECK(g.sequence.size() == 30);
    CHECK((g.gram - 10.0 * Matrix::Identity(3, 3)).norm() < 1e-12);
    CHECK_THROWS_AS(make_plan(Algorithm::adjacent, basis, 8), InvalidInput);
    CHECK(algorithm_from_string("g") == Algorithm::g);
    CHECK(to_string(Algorithm::adjacent) == "adjacent");
    CHECK_THROWS_AS(algorithm_from_string("xy"), InvalidInput);
}

TEST_CASE("zero-noise stationary runs recover theta exactly") {
    const Vector theta{{0.4, -0.3, 0.2}};
    const ArmSet arms = instances::random_polytope_set(3, 9, 4);
    const auto inst = instances::NonStationaryInstance::stationary(arms, 40, theta, instances::Noise::gauss1, true);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Stream s(seed);
        const auto run = run_adjacent_bai(inst, s);
        CHECK((run.estimator - theta).norm() < 1e-10);
        CHECK(run.chosen_arm == inst.best_arm());
        Stream t(seed);
        CHECK(run_g_baseline(inst, t).chosen_arm == inst.best_arm());
    }
}

TEST_CASE("execution is reproducible and the gram is permutation invariant") {
    const ArmSet arms = instances::circle_set(8);
    const auto inst = instances::NonStationaryInstance::two_phase(arms, 64, Vector{{0.5, 0.1}}, Vector{{0.3, 0.0}});
    const auto plan = make_plan(Algorithm::adjacent, arms, 64);
    Stream a(77), b(77);
    const auto ra = execute(plan, inst, a);
    const auto rb = execute(plan, inst, b);
    CHECK(ra.permutation == rb.permutation);
    CHECK(ra.rewards == rb.rewards);
    CHECK(ra.estimator == rb.estimator);
    Matrix gram = Matrix::Zero(2, 2);
    for (std::size_t arm : ra.plays) gram += arms[arm] * arms[arm].transpose();
    CHECK((gram - plan.gram).norm() < 1e-12);
    CHECK_THROWS_AS(execute(plan, inst.with_horizon(66), a), InvalidInput);
}

TEST_CASE("adjacent BAI on a hard instance at a large budget rarely errs") {
    const ArmSet arms = instances::scaled_to_unit_ball(instances::square_set());
    const auto adj = geometry::compute_adjacent_pairs(arms);
    const auto ad = design::adjacent_optimal(arms, adj);
    const double gap = 0.3;
    const auto hp = instances::construct_hard_pair(arms, adj, 0, 1, ad.weights, gap, 2);
    const int t = 2 * static_cast<int>(100.0 * ad.objective / (gap * gap));
    const auto inst = hp.instance_a.with_horizon(t);
    const auto plan = make_plan(Algorithm::adjacent, arms, adj, t);
    int errors = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        Stream s = Stream::derive(5, 6, i);
        errors += execute(plan, inst, s).chosen_arm != inst.best_arm() ? 1 : 0;
    }
    CHECK(errors < 20);
}

TEST_CASE("property: estimator error is centred") {
    const ArmSet arms = instances::random_polytope_set(2, 6, 12);
    const auto inst = instances::NonStationaryInstance::two_phase(arms, 50, Vector{{0.5, -0.5}}, Vector{{-0.2, 0.4}});
    const auto plan = make_plan(Algorithm::adjacent, arms, 50);
    const int n = 4000;
    Vector sum = Vector::Zero(2);
    Vector sq = Vector::Zero(2);
    for (int i = 0; i < n; ++i) {
        Stream s = Stream::derive(1, 2, static_cast<std::uint64_t>(i));
        const Vector e = execute(plan, inst, s).estimator - inst.theta_bar();
        sum += e;
        sq += e.cwiseProduct(e);
    }
    for (int j = 0; j < 2; ++j) {
        const double mean = sum(j) / n;
        const double se = std::sqrt((sq(j) / n - mean * mean) / n);
        CHECK(std::abs(mean) <= 4.0 * se);
    }
}
