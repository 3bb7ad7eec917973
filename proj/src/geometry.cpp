#include "adjbai/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace adjbai::geometry {

bool AdjacencyStructure::is_adjacent(std::size_t a, std::size_t b) const {
    const ArmPair p = make_pair_sorted(a, b);
    return std::binary_search(adjacent_pairs.begin(), adjacent_pairs.end(), p);
}

const std::vector<std::size_t>& AdjacencyStructure::neighbors_of(std::size_t x) const {
    static const std::vector<std::size_t> empty;
    const auto it = neighbors.find(x);
    return it == neighbors.end() ? empty : it->second;
}

std::size_t AdjacencyStructure::max_degree() const {
    std::size_t m = 0;
    for (const auto& [x, nb] : neighbors) m = std::max(m, nb.size());
    return m;
}

void rebuild_neighbors(AdjacencyStructure& adj) {
    adj.neighbors.clear();
    for (std::size_t x : adj.extreme_points) adj.neighbors[x];
    for (const auto& [a, b] : adj.adjacent_pairs) {
        adj.neighbors[a].push_back(b);
        adj.neighbors[b].push_back(a);
    }
    for (auto& [x, nb] : adj.neighbors) std::sort(nb.begin(), nb.end());
}

CenteredArms center_arm_set(const std::vector<Vector>& arms) {
    CenteredArms out;
    out.centroid = Vector::Zero(arms.front().size());
    for (const auto& a : arms) out.centroid += a;
    out.centroid /= static_cast<double>(arms.size());
    out.arms.reserve(arms.size());
    for (const auto& a : arms) out.arms.push_back(a - out.centroid);
    return out;
}

CenteredArms center_arm_set(const ArmSet& arms) { return center_arm_set(arms.arms()); }

LinearProgram extreme_point_program(const std::vector<Vector>& centered, std::size_t index) {
    const int d = static_cast<int>(centered.front().size());
    LinearProgram lp;
    lp.variable_count = d + 1;
    lp.objective = Vector::Zero(d + 1);
    lp.objective(d) = 1.0;
    Vector eq = Vector::Zero(d + 1);
    eq.head(d) = centered[index];
    lp.equalities.push_back({eq, 1.0});
    for (std::size_t j = 0; j < centered.size(); ++j) {
        if (j == index) continue;
        Vector row(d + 1);
        row.head(d) = centered[j];
        row(d) = 1.0;
        lp.inequalities.push_back({row, 1.0});
    }
    return lp;
}

LinearProgram adjacency_program(const std::vector<Vector>& centered,
                                const std::vector<std::size_t>& extreme, std::size_t a,
                                std::size_t b) {
    const int d = static_cast<int>(centered.front().size());
    LinearProgram lp;
    lp.variable_count = d + 1;
    lp.objective = Vector::Zero(d + 1);
    lp.objective(d) = 1.0;
    for (std::size_t idx : {a, b}) {
        Vector eq = Vector::Zero(d + 1);
        eq.head(d) = centered[idx];
        lp.equalities.push_back({eq, 1.0});
    }
    for (std::size_t j : extreme) {
        if (j == a || j == b) continue;
        Vector row(d + 1);
        row.head(d) = centered[j];
        row(d) = 1.0;
        lp.inequalities.push_back({row, 1.0});
    }
    return lp;
}

double largest_minor(const Vector& a, const Vector& b) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        for (Eigen::Index j = i + 1; j < a.size(); ++j) {
            best = std::max(best, std::abs(a(i) * b(j) - a(j) * b(i)));
        }
    }
    return best;
}

namespace {

struct ExtremeScan {
    std::vector<std::size_t> extreme;
    std::vector<std::size_t> near;
};

ExtremeScan scan_extreme(const std::vector<Vector>& centered) {
    ExtremeScan s;
    for (std::size_t i = 0; i < centered.size(); ++i) {
        const LpResult r = solve_lp(extreme_point_program(centered, i));
        // x.w = 1 has no solution only for an arm sitting at the centroid.
        if (r.status == LpStatus::infeasible) continue;
        if (r.status != LpStatus::optimal) {
            throw NumericalFailure("extreme point LP for arm " + std::to_string(i) + " returned " +
                                   to_string(r.status));
        }
        if (r.value > kTolMargin) s.extreme.push_back(i);
        if (r.value > 0.0 && r.value <= 10.0 * kTolMargin) s.near.push_back(i);
    }
    return s;
}

}  // namespace

std::vector<std::size_t> compute_extreme_points(const ArmSet& arms) {
    return scan_extreme(center_arm_set(arms).arms).extreme;
}

AdjacencyStructure compute_adjacent_pairs(const ArmSet& arms) {
    const CenteredArms c = center_arm_set(arms);
    ExtremeScan scan = scan_extreme(c.arms);

    AdjacencyStructure adj;
    adj.centroid = c.centroid;
    adj.extreme_points = scan.extreme;
    adj.near_threshold_points = scan.near;
    const auto& v = adj.extreme_points;

    if (v.size() == 2) {
        // The hull is a segment; its only edge is the polytope itself.
        const ArmPair p = make_pair_sorted(v[0], v[1]);
        adj.adjacent_pairs.push_back(p);
        adj.edge_witness[p] = EdgeWitness{Vector::Zero(arms.dim()),
                                          std::numeric_limits<double>::infinity()};
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                if (largest_minor(c.arms[v[i]], c.arms[v[j]]) <= kPairIndependenceTol) continue;
                const LpResult r = solve_lp(adjacency_program(c.arms, v, v[i], v[j]));
                if (r.status == LpStatus::infeasible) continue;
                if (r.status != LpStatus::optimal) {
                    throw NumericalFailure("adjacency LP for pair (" + std::to_string(v[i]) + ", " +
                                           std::to_string(v[j]) + ") returned " + to_string(r.status));
                }
                const ArmPair p{v[i], v[j]};
                if (r.value > 0.0 && r.value <= 10.0 * kTolMargin) adj.near_threshold_pairs.push_back(p);
                if (r.value > kTolMargin) {
                    adj.adjacent_pairs.push_back(p);
                    adj.edge_witness[p] = EdgeWitness{r.solution.head(arms.dim()), r.value};
                }
            }
        }
    }
    std::sort(adj.adjacent_pairs.begin(), adj.adjacent_pairs.end());
    rebuild_neighbors(adj);
    return adj;
}

AdjacencyStructure hull_oracle_2d(const ArmSet& arms) {
    if (arms.dim() != 2) throw InvalidInput("hull_oracle_2d requires d = 2");
    std::vector<std::size_t> order(arms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const Vector& p = arms[a];
        const Vector& q = arms[b];
        return p(0) < q(0) || (p(0) == q(0) && p(1) < q(1));
    });
    auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
        const Vector u = arms[a] - arms[o];
        const Vector w = arms[b] - arms[o];
        return u(0) * w(1) - u(1) * w(0);
    };
    std::vector<std::size_t> hull(2 * order.size());
    std::size_t k = 0;
    for (std::size_t idx : order) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], idx) <= 0.0) --k;
        hull[k++] = idx;
    }
    for (std::size_t i = order.size() - 1, lower = k + 1; i-- > 0;) {
        const std::size_t idx = order[i];
        while (k >= lower && cross(hull[k - 2], hull[k - 1], idx) <= 0.0) --k;
        hull[k++] = idx;
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw InvalidInput("hull_oracle_2d: arms are collinear");

    AdjacencyStructure adj;
    adj.centroid = center_arm_set(arms).centroid;
    adj.extreme_points = hull;
    std::sort(adj.extreme_points.begin(), adj.extreme_points.end());
    for (std::size_t i = 0; i < hull.size(); ++i) {
        adj.adjacent_pairs.push_back(make_pair_sorted(hull[i], hull[(i + 1) % hull.size()]));
    }
    std::sort(adj.adjacent_pairs.begin(), adj.adjacent_pairs.end());
    rebuild_neighbors(adj);
    return adj;
}

bool same_structure(const AdjacencyStructure& a, const AdjacencyStructure& b) {
    return a.extreme_points == b.extreme_points && a.adjacent_pairs == b.adjacent_pairs;
}

bool skeleton_connected(const AdjacencyStructure& adj) {
    if (adj.extreme_points.empty()) return false;
    std::set<std::size_t> seen{adj.extreme_points.front()};
    std::vector<std::size_t> stack{adj.extreme_points.front()};
    while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t y : adj.neighbors_of(x)) {
            if (seen.insert(y).second) stack.push_back(y);
        }
    }
    return seen.size() == adj.extreme_points.size();
}

}  // namespace adjbai::geometry
