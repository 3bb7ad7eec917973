#pragma once

#include "adjbai/core.hpp"

#include <string>
#include <vector>

namespace adjbai::geometry {

/// A single linear constraint `row . u (= or <=) rhs`.
struct LinearConstraint {
    Vector row;
    double rhs = 0.0;
};

/// maximize objective . u over free (sign-unrestricted) variables u.
struct LinearProgram {
    Vector objective;
    std::vector<LinearConstraint> equalities;
    std::vector<LinearConstraint> inequalities;  // row . u <= rhs
    int variable_count = 0;

    /// Throws InvalidInput if any row length disagrees with variable_count.
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus s);

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    Vector solution;  // empty unless optimal
    int pivots = 0;
};

/// Dense two-phase tableau simplex using Bland's rule.
///
/// Free variables are split into positive and negative parts internally. The
/// returned optimizer is recomputed from the final basis against the original
/// data, so feasibility residuals are at round-off level. Throws
/// NumericalFailure when the pivot count exceeds `max_pivots`.
LpResult solve_lp(const LinearProgram& lp, int max_pivots = 100000);

}  // namespace adjbai::geometry
