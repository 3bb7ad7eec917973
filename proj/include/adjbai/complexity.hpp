#pragma once

#include "adjbai/core.hpp"
#include "adjbai/design.hpp"
#include "adjbai/geometry.hpp"
#include "adjbai/instances.hpp"

#include <cstddef>
#include <optional>

namespace adjbai::complexity {

/// d / gap^2
double h_g(const ArmSet& arms, double gap);

/// Adjacent-optimal objective / gap^2.
double h_adjacent(const ArmSet& arms, const geometry::AdjacencyStructure& adj, double gap,
                  const design::SolverOptions& opts = {});
double h_adjacent(const ArmSet& arms, double gap, const design::SolverOptions& opts = {});

/// (1/4) exp(-4 T / h_adj)
double lower_bound_value(double h_adj, double horizon);
/// deg * exp(-T / (36 h_adj)); throws InvalidInput when deg < 1.
double upper_bound_value(double h_adj, double horizon, std::size_t deg);

/// sum_t sum_x p_t(x) (x'(theta_t - theta'_t))^2 / 2 with probs a T x K matrix
/// of sampling probabilities. Both instances must share arms and horizon and
/// carry Gaussian noise.
double kl_exponent(const instances::NonStationaryInstance& a, const instances::NonStationaryInstance& b,
                   const Matrix& probs);

/// probs with row t equal to lambda for every t.
Matrix constant_sampling(const std::vector<double>& lambda, int horizon);

enum class Comparators { all_pairs, adjacent_only };

struct StationaryComplexity {
    double value = 0.0;
    std::size_t best_arm = 0;
    std::size_t comparator_count = 0;
    design::Design design;
};

/// min over lambda of max over comparators x of ||x* - x||^2_{A^{-1}} / ((x* - x)' theta)^2.
/// Throws InvalidInput when the best arm is not unique or a comparator has zero gap.
StationaryComplexity stationary_complexity(const ArmSet& arms, const geometry::AdjacencyStructure& adj,
                                           const Vector& theta, Comparators which,
                                           const design::SolverOptions& opts = {});

struct ComplexityReport {
    int d = 0;
    double min_gap = 0.0;
    double h_g = 0.0;
    double h_adjacent = 0.0;
    double ratio = 0.0;
    double adjacent_objective = 0.0;
    double solver_gap = 0.0;
    std::size_t deg = 0;
    bool deg_from_instance = false;
    std::optional<double> horizon;
    std::optional<double> lower_bound;
    std::optional<double> upper_bound;

    double lower_bound_at(double horizon) const { return lower_bound_value(h_adjacent, horizon); }
    double upper_bound_at(double horizon) const { return upper_bound_value(h_adjacent, horizon, deg); }
};

/// deg is |I^{x*}| when best_arm is given and the max vertex degree otherwise.
ComplexityReport complexity_report(const ArmSet& arms, const geometry::AdjacencyStructure& adj, double gap,
                                   std::optional<std::size_t> best_arm = {},
                                   std::optional<double> horizon = {},
                                   const design::SolverOptions& opts = {});

}  // namespace adjbai::complexity
