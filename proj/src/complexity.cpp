#include "adjbai/complexity.hpp"

#include <cmath>
#include <limits>

namespace adjbai::complexity {

namespace {

void require_gap(double gap) {
    if (!(gap > 0.0)) throw InvalidInput("gap must be positive");
}

}  // namespace

double h_g(const ArmSet& arms, double gap) {
    require_gap(gap);
    return arms.dim() / (gap * gap);
}

double h_adjacent(const ArmSet& arms, const geometry::AdjacencyStructure& adj, double gap,
                  const design::SolverOptions& opts) {
    require_gap(gap);
    return design::adjacent_optimal(arms, adj, opts).objective / (gap * gap);
}

double h_adjacent(const ArmSet& arms, double gap, const design::SolverOptions& opts) {
    return h_adjacent(arms, geometry::compute_adjacent_pairs(arms), gap, opts);
}

double lower_bound_value(double h_adj, double horizon) { return 0.25 * std::exp(-4.0 * horizon / h_adj); }

double upper_bound_value(double h_adj, double horizon, std::size_t deg) {
    if (deg < 1) throw InvalidInput("degree must be at least 1");
    return static_cast<double>(deg) * std::exp(-horizon / (36.0 * h_adj));
}

double kl_exponent(const instances::NonStationaryInstance& a, const instances::NonStationaryInstance& b,
                   const Matrix& probs) {
    if (a.horizon() != b.horizon()) throw InvalidInput("instances have different horizons");
    if (a.arms().size() != b.arms().size() || a.arms().as_matrix() != b.arms().as_matrix()) {
        throw InvalidInput("instances have different arm sets");
    }
    if (a.noise() != instances::Noise::gauss1 || b.noise() != instances::Noise::gauss1) {
        throw InvalidInput("the KL exponent needs unit Gaussian noise");
    }
    const auto k = static_cast<Eigen::Index>(a.arms().size());
    if (probs.rows() != a.horizon() || probs.cols() != k) throw InvalidInput("sampling matrix must be T x K");
    double total = 0.0;
    for (int t = 0; t < a.horizon(); ++t) {
        for (Eigen::Index x = 0; x < k; ++x) {
            const double p = probs(t, x);
            if (p == 0.0) continue;
            const auto xi = static_cast<std::size_t>(x);
            const double diff = a.mean_reward(xi, t) - b.mean_reward(xi, t);
            total += p * diff * diff / 2.0;
        }
    }
    return total;
}

Matrix constant_sampling(const std::vector<double>& lambda, int horizon) {
    Matrix p(horizon, static_cast<Eigen::Index>(lambda.size()));
    for (int t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < lambda.size(); ++i) p(t, static_cast<Eigen::Index>(i)) = lambda[i];
    }
    return p;
}

StationaryComplexity stationary_complexity(const ArmSet& arms, const geometry::AdjacencyStructure& adj,
                                           const Vector& theta, Comparators which,
                                           const design::SolverOptions& opts) {
    if (theta.size() != arms.dim()) throw InvalidInput("theta dimension differs from arm dimension");
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const double v = arms[i].dot(theta);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (i != best && !(arms[i].dot(theta) < best_value)) throw InvalidInput("best arm is not unique");
    }

    std::vector<std::size_t> comparators;
    if (which == Comparators::all_pairs) {
        for (std::size_t i = 0; i < arms.size(); ++i) {
            if (i != best) comparators.push_back(i);
        }
    } else {
        comparators = adj.neighbors_of(best);
        if (comparators.empty()) throw InvalidInput("best arm has no adjacent neighbors");
    }
    std::vector<Vector> dirs;
    for (std::size_t i : comparators) {
        const Vector diff = arms[best] - arms[i];
        const double g = diff.dot(theta);
        if (!(g > 0.0)) throw InvalidInput("comparator " + std::to_string(i) + " has zero gap");
        dirs.push_back(diff / g);
    }
    StationaryComplexity out;
    out.best_arm = best;
    out.comparator_count = comparators.size();
    out.design = design::minmax_design(arms, design::DirectionSet(std::move(dirs)), opts);
    out.value = out.design.objective;
    return out;
}

ComplexityReport complexity_report(const ArmSet& arms, const geometry::AdjacencyStructure& adj, double gap,
                                   std::optional<std::size_t> best_arm, std::optional<double> horizon,
                                   const design::SolverOptions& opts) {
    require_gap(gap);
    const design::Design ad = design::adjacent_optimal(arms, adj, opts);
    ComplexityReport r;
    r.d = arms.dim();
    r.min_gap = gap;
    r.h_g = h_g(arms, gap);
    r.adjacent_objective = ad.objective;
    r.solver_gap = ad.duality_gap;
    r.h_adjacent = ad.objective / (gap * gap);
    r.ratio = r.h_adjacent / r.h_g;
    if (best_arm) {
        r.deg = adj.neighbors_of(*best_arm).size();
        r.deg_from_instance = true;
    } else {
        r.deg = adj.max_degree();
    }
    if (horizon) {
        r.horizon = horizon;
        r.lower_bound = r.lower_bound_at(*horizon);
        r.upper_bound = r.upper_bound_at(*horizon);
    }
    return r;
}

}  // namespace adjbai::complexity
