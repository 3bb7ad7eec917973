#include "adjbai/algorithms.hpp"

#include <numeric>

namespace adjbai::algorithms {

std::string to_string(Algorithm a) { return a == Algorithm::adjacent ? "adjacent" : "g"; }

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "adjacent") return Algorithm::adjacent;
    if (s == "g") return Algorithm::g;
    throw InvalidInput("unknown algorithm '" + s + "'");
}

BaiPlan make_plan(Algorithm algo, const ArmSet& arms, const geometry::AdjacencyStructure& adj, int horizon,
                  const design::SolverOptions& opts) {
    const int d = arms.dim();
    if (horizon < d * d) {
        throw InvalidInput("budget T = " + std::to_string(horizon) + " is below d^2 = " + std::to_string(d * d));
    }
    BaiPlan plan;
    plan.algorithm = algo;
    plan.horizon = horizon;
    plan.adjacency = adj;
    // The rounding guarantee is checked on adjacent-pair directions for both designs.
    const design::DirectionSet guard = design::pair_directions(arms, adj.adjacent_pairs);
    plan.design = algo == Algorithm::adjacent ? design::minmax_design(arms, guard, opts)
                                              : design::minmax_design(arms, design::arm_directions(arms), opts);
    plan.allocation = design::round_design(arms, plan.design, guard, horizon);
    plan.sequence = design::allocation_sequence(plan.allocation);
    plan.gram = plan.allocation.empirical_matrix * static_cast<double>(horizon);
    return plan;
}

BaiPlan make_plan(Algorithm algo, const ArmSet& arms, int horizon, const design::SolverOptions& opts) {
    return make_plan(algo, arms, geometry::compute_adjacent_pairs(arms), horizon, opts);
}

std::vector<std::size_t> sample_permutation(std::size_t horizon, Stream& stream) {
    std::vector<std::size_t> p(horizon);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = horizon; i > 1; --i) {
        const auto j = static_cast<std::size_t>(stream.below(i));
        std::swap(p[i - 1], p[j]);
    }
    return p;
}

Vector least_squares(const Matrix& gram, const Vector& rhs) {
    const design::SpdFactor f(gram);
    Vector theta = f.solve(rhs);
    const double residual = (gram * theta - rhs).norm();
    if (residual > 1e-9 * std::max(rhs.norm(), 1e-300) && !f.ridged()) {
        throw NumericalFailure("least squares residual " + std::to_string(residual) + " is too large");
    }
    return theta;
}

Vector least_squares(const Matrix& gram, const Matrix& plays, const Vector& rewards) {
    if (plays.rows() != rewards.size()) throw InvalidInput("plays and rewards differ in length");
    return least_squares(gram, Vector(plays.transpose() * rewards));
}

Vector least_squares_qr(const Matrix& plays, const Vector& rewards) {
    if (plays.rows() != rewards.size()) throw InvalidInput("plays and rewards differ in length");
    return plays.householderQr().solve(rewards);
}

std::size_t argmax_arm(const ArmSet& arms, const Vector& theta) {
    std::size_t best = 0;
    double value = arms[0].dot(theta);
    for (std::size_t i = 1; i < arms.size(); ++i) {
        const double v = arms[i].dot(theta);
        if (v > value) {
            value = v;
            best = i;
        }
    }
    return best;
}

BaiRun execute(const BaiPlan& plan, const instances::NonStationaryInstance& inst, Stream& stream) {
    if (inst.horizon() != plan.horizon) throw InvalidInput("plan horizon differs from instance horizon");
    if (plan.allocation.counts.size() != inst.arms().size()) throw InvalidInput("plan built for another arm set");
    const auto horizon = static_cast<std::size_t>(plan.horizon);
    BaiRun run;
    run.allocation = plan.allocation;
    run.gram = plan.gram;
    run.permutation = sample_permutation(horizon, stream);
    run.plays.resize(horizon);
    for (std::size_t t = 0; t < horizon; ++t) run.plays[t] = plan.sequence[run.permutation[t]];
    run.rewards = instances::sample_rewards(inst, run.plays, stream);

    Vector rhs = Vector::Zero(inst.arms().dim());
    std::vector<double> per_arm(inst.arms().size(), 0.0);
    for (std::size_t t = 0; t < horizon; ++t) per_arm[run.plays[t]] += run.rewards[t];
    for (std::size_t i = 0; i < per_arm.size(); ++i) {
        if (per_arm[i] != 0.0) rhs += per_arm[i] * inst.arms()[i];
    }
    run.estimator = least_squares(run.gram, rhs);
    run.chosen_arm = argmax_arm(inst.arms(), run.estimator);
    return run;
}

BaiRun run_adjacent_bai(const instances::NonStationaryInstance& inst, Stream& stream,
                        const design::SolverOptions& opts) {
    return execute(make_plan(Algorithm::adjacent, inst.arms(), inst.horizon(), opts), inst, stream);
}

BaiRun run_g_baseline(const instances::NonStationaryInstance& inst, Stream& stream,
                      const design::SolverOptions& opts) {
    return execute(make_plan(Algorithm::g, inst.arms(), inst.horizon(), opts), inst, stream);
}

}  // namespace adjbai::algorithms
