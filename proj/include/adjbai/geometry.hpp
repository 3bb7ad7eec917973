#pragma once

#include "adjbai/core.hpp"
#include "adjbai/lp.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace adjbai::geometry {

/// Strict positivity threshold applied to the optimal margin of the
/// supporting-hyperplane LPs on the centered, unnormalized arm set.
inline constexpr double kTolMargin = 1e-7;

/// Two centered arms whose largest 2x2 minor is below this are treated as
/// linearly dependent.
inline constexpr double kPairIndependenceTol = 1e-10;

using ArmPair = std::pair<std::size_t, std::size_t>;  // always first < second

inline ArmPair make_pair_sorted(std::size_t a, std::size_t b) {
    return a < b ? ArmPair{a, b} : ArmPair{b, a};
}

/// Supporting hyperplane of an edge on the centered arm set:
/// x.w = x'.w = 1 and y.w <= 1 - margin for every other extreme point y.
///
/// When the hull has exactly two vertices the segment is the whole polytope;
/// w is then zero and margin is +infinity (the condition on other vertices is
/// vacuous).
struct EdgeWitness {
    Vector w;
    double margin = 0.0;
};

struct AdjacencyStructure {
    std::vector<std::size_t> extreme_points;               // sorted
    std::vector<ArmPair> adjacent_pairs;                   // sorted, each first < second
    std::map<std::size_t, std::vector<std::size_t>> neighbors;
    std::map<ArmPair, EdgeWitness> edge_witness;
    Vector centroid;
    /// Indices / pairs whose LP optimum fell in (0, 10 * kTolMargin].
    std::vector<std::size_t> near_threshold_points;
    std::vector<ArmPair> near_threshold_pairs;

    bool is_adjacent(std::size_t a, std::size_t b) const;
    const std::vector<std::size_t>& neighbors_of(std::size_t x) const;
    std::size_t max_degree() const;
};

struct CenteredArms {
    std::vector<Vector> arms;
    Vector centroid;
};

CenteredArms center_arm_set(const std::vector<Vector>& arms);
CenteredArms center_arm_set(const ArmSet& arms);

/// LP1: maximize eps s.t. x.w = 1, y.w <= 1 - eps for every other centered arm.
/// Variables are (w, eps).
LinearProgram extreme_point_program(const std::vector<Vector>& centered, std::size_t index);

/// LP2 for a pair of extreme points against the remaining extreme points.
LinearProgram adjacency_program(const std::vector<Vector>& centered,
                                const std::vector<std::size_t>& extreme, std::size_t a,
                                std::size_t b);

/// Largest absolute 2x2 minor of the 2 x d matrix [a; b].
double largest_minor(const Vector& a, const Vector& b);

std::vector<std::size_t> compute_extreme_points(const ArmSet& arms);

/// Extreme points plus edges of conv(arms), each edge carrying its witness.
AdjacencyStructure compute_adjacent_pairs(const ArmSet& arms);

/// Rebuild the neighbor lists from adjacent_pairs.
void rebuild_neighbors(AdjacencyStructure& adj);

/// Independent 2-D oracle: monotone-chain hull, consecutive vertices adjacent.
/// Throws InvalidInput when d != 2 or all arms are collinear.
AdjacencyStructure hull_oracle_2d(const ArmSet& arms);

/// True when extreme point sets and edge sets agree exactly.
bool same_structure(const AdjacencyStructure& a, const AdjacencyStructure& b);

/// True when the undirected graph (extreme_points, adjacent_pairs) is connected.
bool skeleton_connected(const AdjacencyStructure& adj);

}  // namespace adjbai::geometry
