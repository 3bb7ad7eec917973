#pragma once

#include "adjbai/core.hpp"
#include "adjbai/geometry.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace adjbai::design {

/// Cholesky factor of a symmetric positive definite matrix used for every
/// A^{-1} product in the library. No explicit inverse is ever formed.
///
/// When the condition number exceeds kRidgeCondition a ridge of
/// kRidge * I is added and ridged() reports it. Throws SingularMatrix when the
/// smallest eigenvalue is at or below kMinEigenvalue.
class SpdFactor {
public:
    static constexpr double kMinEigenvalue = 1e-12;
    static constexpr double kRidgeCondition = 1e12;
    static constexpr double kRidge = 1e-10;

    explicit SpdFactor(const Matrix& a);

    Vector solve(const Vector& z) const { return llt_.solve(z); }
    Matrix solve(const Matrix& z) const { return llt_.solve(z); }
    /// z' A^{-1} z
    double inv_quad(const Vector& z) const;
    bool ridged() const noexcept { return ridged_; }

private:
    Eigen::LLT<Matrix> llt_;
    bool ridged_ = false;
};

/// Directions whose worst-case prediction variance a design minimizes.
class DirectionSet {
public:
    DirectionSet() = default;
    /// Throws InvalidInput when empty, when a direction is zero, or when the
    /// dimensions disagree.
    explicit DirectionSet(std::vector<Vector> directions);

    std::size_t size() const noexcept { return dirs_.size(); }
    const Vector& operator[](std::size_t i) const { return dirs_[i]; }
    const std::vector<Vector>& directions() const noexcept { return dirs_; }
    /// d x m matrix with one direction per column.
    Matrix as_columns() const;

private:
    std::vector<Vector> dirs_;
};

/// Every arm as a direction (G-optimal design).
DirectionSet arm_directions(const ArmSet& arms);
/// x - x' for each listed pair.
DirectionSet pair_directions(const ArmSet& arms, const std::vector<geometry::ArmPair>& pairs);
/// All distinct extreme-point pairs (XY-optimal design).
std::vector<geometry::ArmPair> extreme_pairs(const geometry::AdjacencyStructure& adj);

/// A(lambda) = sum_x lambda_x x x'.
Matrix design_matrix(const ArmSet& arms, const std::vector<double>& weights);

/// z' A^{-1} z through a Cholesky solve. Throws SingularMatrix.
double mahalanobis_sq(const Vector& z, const Matrix& a, bool* ridged = nullptr);

/// max over directions of y' A^{-1} y.
double max_variance(const DirectionSet& dirs, const Matrix& a);

enum class SolverMethod { barrier, frank_wolfe };

struct SolverOptions {
    double tol = 1e-4;     // relative certified duality gap
    int max_iter = 20000;  // Newton steps (barrier) or iterations (Frank-Wolfe)
    SolverMethod method = SolverMethod::barrier;
};

struct Design {
    std::vector<double> weights;
    Matrix design_matrix;
    double objective = 0.0;      // max_y y' A(weights)^{-1} y
    double lower_bound = 0.0;    // certified lower bound on the optimum
    double duality_gap = 0.0;    // objective - lower_bound, >= 0
    int iterations = 0;
    bool converged = false;
    bool ridge_applied = false;
    /// Objective of the best iterate so far, recorded after each iteration.
    std::vector<double> objective_trace;
};

/// argmin over the simplex of max_y y' A(lambda)^{-1} y.
///
/// The default method is a primal log-barrier method on the epigraph form
/// min t s.t. y' A(lambda)^{-1} y <= t, lambda > 0, sum lambda = 1, with
/// Newton centering and a geometric schedule on the barrier weight. The
/// Frank-Wolfe method runs away steps on a log-sum-exp smoothing of the max
/// whose temperature is tightened adaptively; it is slower and kept as an
/// independent path.
///
/// Both return the iterate with the smallest true objective seen. Any
/// (lambda, w) pair with w a distribution over directions certifies
///   optimum >= 2 tr(A^{-1} B(w)) - max_x x' A^{-1} B(w) A^{-1} x,
/// with B(w) = sum_y w_y y y', which gives the reported lower bound and gap.
Design minmax_design(const ArmSet& arms, const DirectionSet& dirs, const SolverOptions& opts = {});

Design g_optimal(const ArmSet& arms, const SolverOptions& opts = {});
Design xy_optimal(const ArmSet& arms, const geometry::AdjacencyStructure& adj,
                  const SolverOptions& opts = {});
Design adjacent_optimal(const ArmSet& arms, const geometry::AdjacencyStructure& adj,
                        const SolverOptions& opts = {});

struct KieferWolfowitzResult {
    bool pass = false;
    double value = 0.0;
    double relative_error = 0.0;
};

KieferWolfowitzResult kiefer_wolfowitz_check(const ArmSet& arms, double tol,
                                             const SolverOptions& opts = {});

/// Weights below this are solver dust and are dropped before rounding.
inline constexpr double kPruneThreshold = 1e-9;

std::vector<double> prune_weights(const std::vector<double>& weights);

/// Move weight along null directions of {(1, vech(x x'))} until at most
/// d(d+1)/2 + 1 arms carry weight. A(lambda) is unchanged.
std::vector<double> reduce_support(const ArmSet& arms, const std::vector<double>& weights);

/// Efficient apportionment of T pulls over the support of weights.
std::vector<int> apportion(const std::vector<double>& weights, int total);

struct Allocation {
    std::vector<int> counts;
    int total = 0;
    Matrix empirical_matrix;       // (1/T) sum_t x_t x_t'
    double rounding_factor = 0.0;  // empirical max variance / design max variance
};

/// Convert a design into T pulls. The guard directions are the ones whose max
/// variance must stay within a factor 2 of the design's; a violation throws
/// NumericalFailure. Throws InvalidInput when T < d^2.
/// The apportionment rule can be replaced for fault-injection tests.
using Apportioner = std::function<std::vector<int>(const std::vector<double>&, int)>;

Allocation round_design(const ArmSet& arms, const Design& design, const DirectionSet& guard,
                        int total, const Apportioner& rule = {});

/// Allocation to the explicit sequence x_1..x_T (arm indices, grouped).
std::vector<std::size_t> allocation_sequence(const Allocation& alloc);

}  // namespace adjbai::design
