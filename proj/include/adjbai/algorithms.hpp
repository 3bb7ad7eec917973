#pragma once

#include "adjbai/core.hpp"
#include "adjbai/design.hpp"
#include "adjbai/geometry.hpp"
#include "adjbai/instances.hpp"
#include "adjbai/random.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace adjbai::algorithms {

enum class Algorithm { adjacent, g };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// Trial-independent artifacts for one (arm set, T, algorithm): adjacency,
/// design, rounded allocation and its grouped play sequence.
struct BaiPlan {
    Algorithm algorithm = Algorithm::adjacent;
    int horizon = 0;
    geometry::AdjacencyStructure adjacency;
    design::Design design;
    design::Allocation allocation;
    std::vector<std::size_t> sequence;  // x_1..x_T as arm indices
    Matrix gram;                        // sum_t x_t x_t'
};

/// Throws InvalidInput when T < d^2.
BaiPlan make_plan(Algorithm algo, const ArmSet& arms, int horizon, const design::SolverOptions& opts = {});
/// Reuses a precomputed adjacency structure.
BaiPlan make_plan(Algorithm algo, const ArmSet& arms, const geometry::AdjacencyStructure& adj, int horizon,
                  const design::SolverOptions& opts = {});

struct BaiRun {
    design::Allocation allocation;
    std::vector<std::size_t> permutation;  // pi(t), 0-based
    std::vector<std::size_t> plays;        // x_{pi(t)} as arm indices
    std::vector<double> rewards;
    Vector estimator;
    std::size_t chosen_arm = 0;
    Matrix gram;
};

/// Uniform permutation of [0, T) by Fisher-Yates.
std::vector<std::size_t> sample_permutation(std::size_t horizon, Stream& stream);

/// Solves gram * theta = rhs by Cholesky. Throws SingularMatrix, and
/// NumericalFailure when the relative residual exceeds 1e-9.
Vector least_squares(const Matrix& gram, const Vector& rhs);
/// Normal equations from explicit plays (rows of `plays`) and rewards.
Vector least_squares(const Matrix& gram, const Matrix& plays, const Vector& rewards);
/// Independent path: Householder QR on the T x d play matrix.
Vector least_squares_qr(const Matrix& plays, const Vector& rewards);

/// argmax_x x' theta, ties to the lowest index.
std::size_t argmax_arm(const ArmSet& arms, const Vector& theta);

/// One trial of a planned algorithm; the plan must match the instance's arms and horizon.
BaiRun execute(const BaiPlan& plan, const instances::NonStationaryInstance& inst, Stream& stream);

/// Adjacent-BAI end to end (plan built for this call).
BaiRun run_adjacent_bai(const instances::NonStationaryInstance& inst, Stream& stream,
                        const design::SolverOptions& opts = {});
/// G-optimal static allocation baseline with the same estimator.
BaiRun run_g_baseline(const instances::NonStationaryInstance& inst, Stream& stream,
                      const design::SolverOptions& opts = {});

}  // namespace adjbai::algorithms
