#include "adjbai/acceptance.hpp"

#include "adjbai/algorithms.hpp"
#include "adjbai/complexity.hpp"
#include "adjbai/design.hpp"
#include "adjbai/geometry.hpp"
#include "adjbai/harness.hpp"
#include "adjbai/instances.hpp"
#include "adjbai/io.hpp"
#include "adjbai/random.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <numeric>

namespace adjbai::acceptance {

using nlohmann::json;
using algorithms::Algorithm;

namespace {

std::size_t mc_trials(const Options& o) { return o.reduced ? 2000 : 10000; }

struct NamedSet {
    std::string name;
    ArmSet arms;
};

// Random spanning sets with d cycling through 2..6 and K <= 40.
std::vector<NamedSet> random_sets(std::uint64_t seed, int count) {
    std::vector<NamedSet> out;
    for (int i = 0; i < count; ++i) {
        const int d = 2 + i % 5;
        const int k = std::min(40, d + 3 + (i * 7) % 30);
        out.push_back({"random_d" + std::to_string(d) + "_k" + std::to_string(k) + "_" + std::to_string(i),
                       instances::random_polytope_set(d, k, seed + static_cast<std::uint64_t>(i))});
    }
    return out;
}

std::vector<NamedSet> structured_sets() {
    std::vector<NamedSet> out;
    for (int d = 2; d <= 6; ++d) out.push_back({"basis" + std::to_string(d), instances::basis_set(d)});
    for (int k : {8, 12, 16, 32, 64}) out.push_back({"circle" + std::to_string(k), instances::circle_set(k)});
    out.push_back({"square", instances::square_set()});
    return out;
}

CriterionResult kiefer_wolfowitz(const Options& o) {
    CriterionResult r{1, "Kiefer-Wolfowitz: G-optimal value equals d", false, "relative error <= 0.01", {}, 0};
    auto sets = random_sets(o.seed, 20);
    for (auto& s : structured_sets()) sets.push_back(s);
    double worst = 0.0;
    std::string worst_name;
    json rows = json::array();
    bool ok = true;
    for (const auto& s : sets) {
        const auto kw = design::kiefer_wolfowitz_check(s.arms, 0.01);
        rows.push_back({{"set", s.name}, {"d", s.arms.dim()}, {"K", s.arms.size()}, {"value", kw.value}});
        ok = ok && kw.pass;
        if (kw.relative_error >= worst) {
            worst = kw.relative_error;
            worst_name = s.name;
        }
    }
    r.pass = ok;
    r.values = {{"sets", sets.size()}, {"max_relative_error", worst}, {"worst_set", worst_name}, {"detail", rows}};
    return r;
}

CriterionResult four_times(const Options& o) {
    CriterionResult r{2, "Adjacent complexity at most 4 H_G", false,
                      "adjacent objective <= 4 d + max(certified gap, 1e-4 * 4 d)", {}, 0};
    auto sets = random_sets(o.seed, 20);
    for (auto& s : structured_sets()) sets.push_back(s);
    sets.push_back({"random3d", instances::random_polytope_set(3, 12, o.seed + 101)});
    int violations = 0;
    double max_ratio = 0.0;
    for (const auto& s : sets) {
        const auto adj = geometry::compute_adjacent_pairs(s.arms);
        const auto ad = design::adjacent_optimal(s.arms, adj);
        const double limit = 4.0 * s.arms.dim();
        if (ad.objective > limit + std::max(ad.duality_gap, 1e-4 * limit)) ++violations;
        max_ratio = std::max(max_ratio, ad.objective / s.arms.dim());
    }
    r.pass = violations == 0;
    r.values = {{"sets", sets.size()}, {"violations", violations}, {"max_h_adjacent_over_h_g", max_ratio}};
    return r;
}

CriterionResult circle_collapse(const Options&) {
    CriterionResult r{3, "Circle collapse of H_adjacent / H_G", false,
                      "strictly decreasing in K; ratio(64) <= 4 sin^2(pi/64) + solver gap", {}, 0};
    std::vector<double> ratios;
    json rows = json::array();
    double gap64 = 0.0;
    for (int k : {8, 16, 32, 64}) {
        const ArmSet arms = instances::circle_set(k);
        const auto adj = geometry::compute_adjacent_pairs(arms);
        const auto ad = design::adjacent_optimal(arms, adj);
        const double ratio = complexity::h_adjacent(arms, adj, 1.0) / complexity::h_g(arms, 1.0);
        ratios.push_back(ratio);
        if (k == 64) gap64 = ad.duality_gap / arms.dim();
        rows.push_back({{"K", k}, {"ratio", ratio}, {"edges", adj.adjacent_pairs.size()}});
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < ratios.size(); ++i) decreasing = decreasing && ratios[i] < ratios[i - 1];
    const double limit = 4.0 * std::pow(std::sin(std::numbers::pi / 64.0), 2);
    r.pass = decreasing && ratios.back() <= limit + gap64 + 1e-12;
    r.values = {{"ratios", rows}, {"strictly_decreasing", decreasing}, {"limit_64", limit}};
    return r;
}

CriterionResult adjacency(const Options& o) {
    CriterionResult r{4, "Adjacency oracle agreement and neighbour property", false,
                      "exact match on 50 random 2-D sets; zero counterexamples on 200 (X, theta)", {}, 0};
    Stream stream(o.seed + 4);
    int mismatches = 0;
    for (int i = 0; i < 50; ++i) {
        const int k = 3 + static_cast<int>(stream.below(28));
        const ArmSet arms = instances::random_polytope_set(2, k, o.seed * 31 + static_cast<std::uint64_t>(i));
        const auto lp = geometry::compute_adjacent_pairs(arms);
        const auto hull = geometry::hull_oracle_2d(arms);
        if (!geometry::same_structure(lp, hull)) ++mismatches;
    }
    int neighbor_failures = 0;
    int corollary_failures = 0;
    int checked_vertices = 0;
    for (int i = 0; i < 200; ++i) {
        const int d = 2 + i % 4;
        const int k = d + 1 + static_cast<int>(stream.below(static_cast<std::uint64_t>(20 - d)));
        const ArmSet arms = instances::random_polytope_set(d, k, o.seed * 97 + static_cast<std::uint64_t>(i));
        Vector theta(d);
        for (int j = 0; j < d; ++j) theta(j) = stream.normal();
        const auto adj = geometry::compute_adjacent_pairs(arms);
        for (std::size_t x : adj.extreme_points) {
            ++checked_vertices;
            bool any_better = false;
            for (std::size_t y = 0; y < arms.size(); ++y) any_better = any_better || (arms[y] - arms[x]).dot(theta) > 0.0;
            bool neighbor_better = false;
            for (std::size_t z : adj.neighbors_of(x)) neighbor_better = neighbor_better || (arms[z] - arms[x]).dot(theta) > 0.0;
            if (any_better != neighbor_better) ++neighbor_failures;
        }
        const std::size_t best = algorithms::argmax_arm(arms, theta);
        bool ok = std::binary_search(adj.extreme_points.begin(), adj.extreme_points.end(), best);
        for (std::size_t z : adj.neighbors_of(best)) ok = ok && arms[z].dot(theta) < arms[best].dot(theta);
        if (!ok) ++corollary_failures;
    }
    r.pass = mismatches == 0 && neighbor_failures == 0 && corollary_failures == 0;
    r.values = {{"oracle_sets", 50},
                {"oracle_mismatches", mismatches},
                {"neighbor_instances", 200},
                {"neighbor_vertices_checked", checked_vertices},
                {"neighbor_counterexamples", neighbor_failures},
                {"argmax_counterexamples", corollary_failures}};
    return r;
}

// Rows of the pair feasibility polyhedron in (theta, v): row' z >= gap.
std::vector<Vector> feasibility_rows(const ArmSet& arms, const std::vector<std::size_t>& extreme, std::size_t x,
                                     std::size_t xp) {
    const int n = arms.dim();
    std::vector<Vector> rows;
    for (std::size_t y : extreme) {
        if (y != x) {
            Vector r = Vector::Zero(2 * n);
            r.head(n) = arms[x] - arms[y];
            rows.push_back(r);
        }
        if (y != xp) {
            Vector r(2 * n);
            r << arms[xp] - arms[y], arms[xp] - arms[y];
            rows.push_back(r);
        }
    }
    return rows;
}

// Point of the polyhedron row' z >= gap deepest inside the box |z - center| <= radius.
Vector interior_point(const std::vector<Vector>& rows, double gap, const Vector& center, double radius) {
    const auto n = center.size();
    geometry::LinearProgram lp;
    lp.variable_count = static_cast<int>(n + 1);
    lp.objective = Vector::Unit(n + 1, n);
    for (const auto& r : rows) {
        Vector row(n + 1);
        row << -r, r.norm();
        lp.inequalities.push_back({row, -gap});
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        lp.inequalities.push_back({Vector::Unit(n + 1, i), center(i) + radius});
        lp.inequalities.push_back({-Vector::Unit(n + 1, i), radius - center(i)});
    }
    lp.inequalities.push_back({Vector::Unit(n + 1, n), radius});
    const auto res = geometry::solve_lp(lp);
    if (res.status != geometry::LpStatus::optimal || !(res.value > 0.0)) {
        throw NumericalFailure("hard pair feasible set has no interior near the optimum");
    }
    return res.solution.head(n);
}

// Pull z toward the interior point until every constraint holds.
void pull_inside(const std::vector<Vector>& rows, double gap, const Vector& inner, Vector& z) {
    double s = 1.0;
    const Vector dir = z - inner;
    for (const auto& r : rows) {
        const double rate = r.dot(dir);
        if (rate < 0.0) s = std::min(s, 0.999 * (r.dot(inner) - gap) / -rate);
    }
    z = inner + s * dir;
}

CriterionResult closed_form(const Options& o) {
    CriterionResult r{5, "Hard pair closed form and optimality", false,
                      "feasible; |objective - 4 gap^2/||x-x'||^2| <= 1e-8 relative; 100 feasible perturbations each "
                      "strictly worse",
                      {}, 0};
    const std::vector<NamedSet> sets = {{"square", instances::square_set()},
                                        {"circle8", instances::circle_set(8)},
                                        {"random3d", instances::random_polytope_set(3, 12, o.seed + 5)}};
    const double gap = 0.3;
    Stream stream(o.seed + 55);
    int pairs = 0;
    int failures = 0;
    int perturbations = 0;
    int not_worse = 0;
    double worst_rel = 0.0;
    std::string first_error;
    for (const auto& s : sets) {
        const auto adj = geometry::compute_adjacent_pairs(s.arms);
        const std::vector<double> uniform(s.arms.size(), 1.0 / static_cast<double>(s.arms.size()));
        const std::vector<double> optimal = design::adjacent_optimal(s.arms, adj).weights;
        for (const auto* lambda : {&uniform, &optimal}) {
            const Matrix a = design::design_matrix(s.arms, *lambda);
            for (const auto& [p, q] : adj.adjacent_pairs) {
                for (const auto& [x, xp] : {std::pair{p, q}, std::pair{q, p}}) {
                    ++pairs;
                    instances::HardInstancePair hp;
                    try {
                        hp = instances::construct_hard_pair(s.arms, adj, x, xp, *lambda, gap, 100);
                    } catch (const std::exception& e) {
                        ++failures;
                        if (first_error.empty()) first_error = e.what();
                        continue;
                    }
                    worst_rel = std::max(worst_rel, std::abs(hp.objective - hp.closed_form) / hp.closed_form);
                    const double scale = 0.2 * (hp.v_star.norm() + hp.theta_star.norm());
                    const auto rows = feasibility_rows(s.arms, adj.extreme_points, x, xp);
                    Vector center(2 * s.arms.dim());
                    center << hp.theta_star, hp.v_star;
                    const Vector inner = interior_point(rows, gap, center, scale);
                    for (int k = 0; k < 100; ++k) {
                        const int n = s.arms.dim();
                        Vector z(2 * n);
                        for (int j = 0; j < 2 * n; ++j) z(j) = center(j) + scale * stream.normal();
                        pull_inside(rows, gap, inner, z);
                        const Vector dv = z.tail(n) - hp.v_star;
                        const auto slack = instances::pair_constraint_slack(s.arms, adj.extreme_points, x, xp,
                                                                            z.head(n), z.tail(n), gap);
                        const bool feasible = slack.first >= 0.0 && slack.second >= 0.0 &&
                                              dv.norm() > 1e-9 * hp.v_star.norm();
                        if (!feasible) continue;
                        ++perturbations;
                        const Vector v = z.tail(n);
                        if (!(v.dot(a * v) > hp.objective)) ++not_worse;
                    }
                }
            }
        }
    }
    r.pass = failures == 0 && worst_rel <= 1e-8 && not_worse == 0 && perturbations == pairs * 100;
    r.values = {{"constructed_pairs", pairs},
                {"construction_failures", failures},
                {"max_relative_error", worst_rel},
                {"feasible_perturbations", perturbations},
                {"perturbations_not_worse", not_worse}};
    if (!first_error.empty()) r.values["first_error"] = first_error;
    return r;
}

std::vector<int> broken_apportion(const std::vector<double>& lambda, int total) {
    const int heavy = static_cast<int>(0.9 * total);
    std::vector<int> n = design::apportion(lambda, total - heavy);
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > 0.0) {
            n[i] += heavy;
            break;
        }
    }
    return n;
}

CriterionResult rounding(const Options& o) {
    CriterionResult r{6, "Rounding factor at most 2", false,
                      "adjacent-direction max variance ratio <= 2 for T in {d^2, 4d^2, 100d^2}", {}, 0};
    std::vector<NamedSet> sets = {{"square", instances::square_set()},
                                  {"circle8", instances::circle_set(8)},
                                  {"circle16", instances::circle_set(16)},
                                  {"basis3", instances::basis_set(3)}};
    for (auto& s : random_sets(o.seed + 6, 10)) sets.push_back(s);
    const design::Apportioner rule = o.corrupt_rounding ? design::Apportioner(broken_apportion) : design::Apportioner{};
    int cases = 0;
    int violations = 0;
    double worst = 0.0;
    for (const auto& s : sets) {
        const auto adj = geometry::compute_adjacent_pairs(s.arms);
        const auto guard = design::pair_directions(s.arms, adj.adjacent_pairs);
        const std::vector<design::Design> designs = {design::g_optimal(s.arms), design::xy_optimal(s.arms, adj),
                                                     design::adjacent_optimal(s.arms, adj)};
        const int d = s.arms.dim();
        for (const auto& des : designs) {
            for (int t : {d * d, 4 * d * d, 100 * d * d}) {
                ++cases;
                try {
                    const auto alloc = design::round_design(s.arms, des, guard, t, rule);
                    worst = std::max(worst, alloc.rounding_factor);
                } catch (const NumericalFailure&) {
                    ++violations;
                    worst = std::numeric_limits<double>::infinity();
                }
            }
        }
    }
    r.pass = violations == 0 && worst <= 2.0;
    r.values = {{"cases", cases}, {"violations", violations}, {"max_factor", std::isfinite(worst) ? json(worst) : json("inf")},
                {"fault_injected", o.corrupt_rounding}};
    return r;
}

// Hard pair on the unit-ball square used by the two bound criteria.
struct SquarePair {
    ArmSet arms;
    geometry::AdjacencyStructure adj;
    design::Design design;
    instances::HardInstancePair pair;
    double h_adjacent = 0.0;
    std::size_t deg = 0;
};

SquarePair square_pair(int horizon) {
    SquarePair sp{instances::scaled_to_unit_ball(instances::square_set()), {}, {}, {}, 0.0, 0};
    sp.adj = geometry::compute_adjacent_pairs(sp.arms);
    sp.design = design::adjacent_optimal(sp.arms, sp.adj);
    const design::SpdFactor f(sp.design.design_matrix);
    geometry::ArmPair worst = sp.adj.adjacent_pairs.front();
    double worst_norm = -1.0;
    for (const auto& [a, b] : sp.adj.adjacent_pairs) {
        const double n = f.inv_quad(sp.arms[a] - sp.arms[b]);
        if (n > worst_norm + 1e-12) {
            worst_norm = n;
            worst = {a, b};
        }
    }
    const double gap = 0.3;
    sp.pair = instances::construct_hard_pair(sp.arms, sp.adj, worst.first, worst.second, sp.design.weights, gap,
                                             horizon);
    sp.h_adjacent = sp.design.objective / (gap * gap);
    sp.deg = sp.adj.neighbors_of(worst.first).size();
    return sp;
}

int even_ceil(double t) {
    const auto n = static_cast<int>(std::ceil(t));
    return n + n % 2;
}

json cell_json(const harness::CellReport& c) { return harness::to_json(c); }

CriterionResult upper_bound(const Options& o) {
    CriterionResult r{7, "Adjacent-BAI error below the upper bound", false,
                      "rate <= deg exp(-T/(36 H)) * 1.1 + Wilson half-width; non-increasing in T", {}, 0};
    const SquarePair base = square_pair(2);
    const int t1 = even_ceil(36.0 * base.h_adjacent * std::log(static_cast<double>(base.deg) / 0.3));
    const std::size_t trials = mc_trials(o);
    json cells = json::array();
    bool ok = base.pair.instance_a.in_unit_regime() && base.pair.instance_b.in_unit_regime();
    for (const auto* which : {&base.pair.instance_a, &base.pair.instance_b}) {
        double previous = 2.0;
        for (int mult : {1, 2, 4}) {
            const int t = t1 * mult;
            const auto inst = which->with_horizon(t);
            const auto plan = algorithms::make_plan(Algorithm::adjacent, base.arms, base.adj, t);
            const std::string name = which == &base.pair.instance_a ? "square/a" : "square/b";
            const auto c = harness::estimate_error(name, inst, plan, trials, o.seed + 7, o.jobs);
            const double bound = complexity::upper_bound_value(base.h_adjacent, t, base.deg);
            ok = ok && !c.failed && c.rate <= 1.1 * bound + c.wilson.half_width() && c.rate <= previous;
            previous = c.rate;
            cells.push_back(cell_json(c));
        }
    }
    r.pass = ok;
    r.values = {{"h_adjacent", base.h_adjacent},
                {"deg", base.deg},
                {"T_grid", {t1, 2 * t1, 4 * t1}},
                {"max_theta_norm", base.pair.max_theta_norm},
                {"trials", trials},
                {"cells", cells}};
    return r;
}

CriterionResult lower_bound(const Options& o) {
    CriterionResult r{8, "Error above the lower bound for both algorithms", false,
                      "max over paired instances of rate >= (1/4) exp(-4T/H) - Wilson half-width", {}, 0};
    SquarePair base = square_pair(2);
    const int t = std::max(base.arms.dim() * base.arms.dim(), even_ceil(base.h_adjacent / 4.0 * std::log(5.0)));
    const double bound = complexity::lower_bound_value(base.h_adjacent, t);
    const std::size_t trials = mc_trials(o);
    json rows = json::array();
    bool ok = true;
    for (Algorithm algo : {Algorithm::adjacent, Algorithm::g}) {
        const auto plan = algorithms::make_plan(algo, base.arms, base.adj, t);
        const auto ca = harness::estimate_error("square/a", base.pair.instance_a.with_horizon(t), plan, trials,
                                                o.seed + 8, o.jobs);
        const auto cb = harness::estimate_error("square/b", base.pair.instance_b.with_horizon(t), plan, trials,
                                                o.seed + 8, o.jobs);
        const auto& worst = ca.rate >= cb.rate ? ca : cb;
        const bool pass = !ca.failed && !cb.failed && worst.rate >= bound - worst.wilson.half_width();
        ok = ok && pass;
        rows.push_back({{"algo", algorithms::to_string(algo)}, {"a", cell_json(ca)}, {"b", cell_json(cb)}, {"pass", pass}});
    }
    r.pass = ok;
    r.values = {{"T", t}, {"bound", bound}, {"h_adjacent", base.h_adjacent}, {"trials", trials}, {"results", rows}};
    return r;
}

CriterionResult sub_gaussian(const Options& o) {
    CriterionResult r{9, "Least-squares estimator is unbiased and 3-sub-Gaussian", false,
                      "|mean| <= 4 SE; var <= 9 s^2 + 99% slack; tail <= exp(-k^2/18) + 99% binomial half-width", {}, 0};
    const ArmSet arms = instances::random_polytope_set(3, 8, o.seed + 9);
    const auto inst = instances::NonStationaryInstance::two_phase(arms, 400, Vector{{0.6, -0.2, 0.3}},
                                                                  Vector{{-0.4, 0.5, 0.1}});
    const auto plan = algorithms::make_plan(Algorithm::adjacent, arms, inst.horizon());
    const std::vector<Vector> dirs = {Vector::Unit(3, 0), Vector::Unit(3, 1), Vector::Unit(3, 2),
                                      Vector{{1.0, 1.0, 1.0}}, Vector{{1.0, -2.0, 0.5}}};
    const std::size_t n = mc_trials(o);
    Matrix proj(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dirs.size()));
    const std::uint64_t id = harness::cell_id("subgaussian", Algorithm::adjacent, inst.horizon());
    for (std::size_t i = 0; i < n; ++i) {
        Stream stream = Stream::derive(o.seed + 9, id, i);
        const auto run = algorithms::execute(plan, inst, stream);
        const Vector err = run.estimator - inst.theta_bar();
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            proj(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = dirs[j].dot(err);
        }
    }
    const design::SpdFactor gram(plan.gram);
    bool ok = true;
    json rows = json::array();
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        const Vector col = proj.col(static_cast<Eigen::Index>(j));
        const double mean = col.mean();
        const double var = (col.array() - mean).square().sum() / static_cast<double>(n - 1);
        const double se = std::sqrt(var / static_cast<double>(n));
        const double sigma2 = gram.inv_quad(dirs[j]);
        const double sigma = std::sqrt(sigma2);
        const double var_slack = harness::kZ99 * var * std::sqrt(2.0 / static_cast<double>(n - 1));
        bool pass = std::abs(mean) <= 4.0 * se && var <= 9.0 * sigma2 + var_slack;
        json tails = json::array();
        for (int k = 1; k <= 3; ++k) {
            const double s = k * sigma;
            const auto count = static_cast<std::size_t>((col.array() > s).count());
            const double p = static_cast<double>(count) / static_cast<double>(n);
            const double limit = std::exp(-s * s / (18.0 * sigma2)) + harness::wilson_interval(count, n, harness::kZ99).half_width();
            pass = pass && p <= limit;
            tails.push_back({{"k", k}, {"rate", p}, {"limit", limit}});
        }
        ok = ok && pass;
        rows.push_back({{"z", io::to_json(dirs[j])},
                        {"mean", mean},
                        {"se", se},
                        {"variance", var},
                        {"nine_sigma2", 9.0 * sigma2},
                        {"sigma2", sigma2},
                        {"tails", tails},
                        {"pass", pass}});
    }
    r.pass = ok;
    r.values = {{"T", inst.horizon()}, {"runs", n}, {"directions", rows}};
    return r;
}

CriterionResult stationary_equivalence(const Options& o) {
    CriterionResult r{10, "Stationary complexity depends only on adjacent arms", false,
                      "all-pairs vs adjacent-only relative difference <= 0.005", {}, 0};
    Stream stream(o.seed + 10);
    double worst = 0.0;
    json rows = json::array();
    int done = 0;
    for (int i = 0; done < 20 && i < 200; ++i) {
        const int d = 2 + i % 3;
        const int k = d + 2 + static_cast<int>(stream.below(static_cast<std::uint64_t>(14 - d)));
        const ArmSet arms = instances::random_polytope_set(d, k, o.seed * 13 + static_cast<std::uint64_t>(i));
        Vector theta(d);
        for (int j = 0; j < d; ++j) theta(j) = stream.normal();
        const auto adj = geometry::compute_adjacent_pairs(arms);
        const auto all = complexity::stationary_complexity(arms, adj, theta, complexity::Comparators::all_pairs);
        const auto near = complexity::stationary_complexity(arms, adj, theta, complexity::Comparators::adjacent_only);
        const double rel = std::abs(all.value - near.value) / std::max(all.value, near.value);
        worst = std::max(worst, rel);
        rows.push_back({{"d", d}, {"K", arms.size()}, {"all_pairs", all.value}, {"adjacent_only", near.value},
                        {"comparators", {all.comparator_count, near.comparator_count}}});
        ++done;
    }
    r.pass = done == 20 && worst <= 0.005;
    r.values = {{"instances", done}, {"max_relative_difference", worst}, {"detail", rows}};
    return r;
}

CriterionResult separation(const Options& o) {
    CriterionResult r{11, "Adjacent-BAI beats the G baseline on C(32)", false,
                      "G error >= 0.15 and Adjacent-BAI Wilson interval strictly below the G interval", {}, 0};
    const ArmSet arms = instances::circle_set(32);
    const auto adj = geometry::compute_adjacent_pairs(arms);
    const auto ad = design::adjacent_optimal(arms, adj);
    const double gap = 0.1;
    const auto& edge = adj.adjacent_pairs.front();
    const auto hp = instances::construct_hard_pair(arms, adj, edge.first, edge.second, ad.weights, gap, 4);

    // Pilot (separate seed): the largest budget at which the baseline still errs at least 15%.
    const std::vector<int> grid = {4, 6, 8, 10, 12, 16, 20, 24, 32, 40, 48, 64, 80, 96, 128, 160, 192, 256, 384, 512};
    const std::size_t pilot_trials = 2000;
    int chosen = -1;
    json pilot = json::array();
    for (int t : grid) {
        const auto plan = algorithms::make_plan(Algorithm::g, arms, adj, t);
        const auto ca = harness::estimate_error("circle32/a", hp.instance_a.with_horizon(t), plan, pilot_trials,
                                                o.seed + 1011, o.jobs);
        const auto cb = harness::estimate_error("circle32/b", hp.instance_b.with_horizon(t), plan, pilot_trials,
                                                o.seed + 1011, o.jobs);
        const double rate = std::max(ca.rate, cb.rate);
        pilot.push_back({{"T", t}, {"g_rate", rate}});
        if (rate >= 0.15) chosen = t;
    }
    if (chosen < 0) {
        r.values = {{"pilot", pilot}, {"note", "no budget with baseline error >= 0.15"}};
        return r;
    }
    const std::size_t trials = mc_trials(o);
    json rows = json::object();
    harness::CellReport worst_g;
    harness::CellReport worst_adj;
    for (Algorithm algo : {Algorithm::g, Algorithm::adjacent}) {
        const auto plan = algorithms::make_plan(algo, arms, adj, chosen);
        const auto ca = harness::estimate_error("circle32/a", hp.instance_a.with_horizon(chosen), plan, trials,
                                                o.seed + 11, o.jobs);
        const auto cb = harness::estimate_error("circle32/b", hp.instance_b.with_horizon(chosen), plan, trials,
                                                o.seed + 11, o.jobs);
        const auto& worst = ca.rate >= cb.rate ? ca : cb;
        (algo == Algorithm::g ? worst_g : worst_adj) = worst;
        rows[algorithms::to_string(algo)] = {{"a", cell_json(ca)}, {"b", cell_json(cb)}, {"counts", plan.allocation.counts}};
    }
    r.pass = worst_g.rate >= 0.15 && worst_adj.wilson.hi < worst_g.wilson.lo;
    r.values = {{"gap", gap},
                {"T", chosen},
                {"pilot", pilot},
                {"g_rate", worst_g.rate},
                {"g_interval", {worst_g.wilson.lo, worst_g.wilson.hi}},
                {"adjacent_rate", worst_adj.rate},
                {"adjacent_interval", {worst_adj.wilson.lo, worst_adj.wilson.hi}},
                {"cells", rows}};
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, const Options& opts) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
            case 1: r = kiefer_wolfowitz(opts); break;
            case 2: r = four_times(opts); break;
            case 3: r = circle_collapse(opts); break;
            case 4: r = adjacency(opts); break;
            case 5: r = closed_form(opts); break;
            case 6: r = rounding(opts); break;
            case 7: r = upper_bound(opts); break;
            case 8: r = lower_bound(opts); break;
            case 9: r = sub_gaussian(opts); break;
            case 10: r = stationary_equivalence(opts); break;
            case 11: r = separation(opts); break;
            default: throw InvalidInput("no criterion " + std::to_string(id));
        }
    } catch (const std::exception& e) {
        r.id = id;
        r.pass = false;
        r.values = {{"exception", e.what()}};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

json manifest(const std::vector<CriterionResult>& results, const Options& opts) {
    json crit = json::array();
    bool all = true;
    for (const auto& r : results) {
        all = all && r.pass;
        crit.push_back({{"id", r.id},
                        {"name", r.name},
                        {"status", r.pass ? "pass" : "fail"},
                        {"tolerance", r.tolerance},
                        {"seconds", r.seconds},
                        {"values", r.values}});
    }
    return {{"schema", 1},
            {"seed", opts.seed},
            {"reduced_trials", opts.reduced},
            {"fault_injection", opts.corrupt_rounding},
            {"generator", Stream::kGenerator},
            {"all_pass", all},
            {"criteria", crit}};
}

std::vector<CriterionResult> acceptance_suite(const std::string& workdir, const Options& opts,
                                              const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> results;
    for (int id = 1; id <= kCriterionCount; ++id) {
        results.push_back(run_criterion(id, opts));
        if (on_result) on_result(results.back());
    }
    if (!workdir.empty()) {
        std::filesystem::create_directories(workdir);
        io::write_file((std::filesystem::path(workdir) / "manifest.json").string(), manifest(results, opts).dump(2));
    }
    return results;
}

}  // namespace adjbai::acceptance
