#include "adjbai/lp.hpp"

#include <cmath>
#include <limits>

namespace adjbai::geometry {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;

struct Tableau {
    Matrix t;                 // (rows + 1) x (cols + 1); last row objective, last column rhs
    std::vector<int> basis;   // basic column per row
    int rows = 0;
    int cols = 0;
    int pivots = 0;

    void pivot(int r, int s) {
        const double p = t(r, s);
        t.row(r) /= p;
        for (int i = 0; i <= rows; ++i) {
            if (i == r) continue;
            const double f = t(i, s);
            if (f != 0.0) t.row(i) -= f * t.row(r);
        }
        basis[static_cast<std::size_t>(r)] = s;
        ++pivots;
    }

    // Bland's rule on columns [0, eligible). Returns false when unbounded.
    bool run(int eligible, int max_pivots) {
        for (;;) {
            int enter = -1;
            for (int j = 0; j < eligible; ++j) {
                if (t(rows, j) < -kCostTol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows; ++i) {
                const double a = t(i, enter);
                if (a <= kPivotTol) continue;
                const double ratio = t(i, cols) / a;
                if (ratio < best - 1e-14 ||
                    (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
                     basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return false;
            if (pivots >= max_pivots) {
                throw NumericalFailure("simplex exceeded pivot cap of " + std::to_string(max_pivots) +
                                       " (rows " + std::to_string(rows) + ", entering column " +
                                       std::to_string(enter) + ")");
            }
            pivot(leave, enter);
        }
    }

    void set_objective(const Vector& cost) {
        // z_j = c_B B^{-1} A_j - c_j, stored in the last row; rhs cell holds c_B x_B.
        t.row(rows).setZero();
        for (int j = 0; j < cols; ++j) t(rows, j) = -cost(j);
        for (int i = 0; i < rows; ++i) {
            const double cb = cost(basis[static_cast<std::size_t>(i)]);
            if (cb != 0.0) t.row(rows) += cb * t.row(i);
        }
    }
};

}  // namespace

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

void LinearProgram::validate() const {
    if (variable_count < 1) throw InvalidInput("linear program needs at least one variable");
    if (objective.size() != variable_count) throw InvalidInput("objective length mismatch");
    for (const auto& c : equalities) {
        if (c.row.size() != variable_count) throw InvalidInput("equality row length mismatch");
    }
    for (const auto& c : inequalities) {
        if (c.row.size() != variable_count) throw InvalidInput("inequality row length mismatch");
    }
}

LpResult solve_lp(const LinearProgram& lp, int max_pivots) {
    lp.validate();
    const int n = lp.variable_count;
    const int me = static_cast<int>(lp.equalities.size());
    const int mi = static_cast<int>(lp.inequalities.size());
    const int m = me + mi;

    // Standard form columns: u+ (n), u- (n), slacks (mi), artificials (as needed).
    Matrix a = Matrix::Zero(m, 2 * n + mi);
    Vector b(m);
    std::vector<bool> needs_artificial(static_cast<std::size_t>(m), true);
    for (int i = 0; i < m; ++i) {
        const LinearConstraint& c = i < me ? lp.equalities[static_cast<std::size_t>(i)]
                                           : lp.inequalities[static_cast<std::size_t>(i - me)];
        a.block(i, 0, 1, n) = c.row.transpose();
        a.block(i, n, 1, n) = -c.row.transpose();
        b(i) = c.rhs;
        if (i >= me) a(i, 2 * n + (i - me)) = 1.0;
        if (b(i) < 0.0) {
            a.row(i) *= -1.0;
            b(i) = -b(i);
        } else if (i >= me) {
            needs_artificial[static_cast<std::size_t>(i)] = false;
        }
    }
    int n_art = 0;
    for (bool f : needs_artificial) n_art += f ? 1 : 0;
    const int structural = 2 * n + mi;

    Tableau tab;
    tab.rows = m;
    tab.cols = structural + n_art;
    tab.t = Matrix::Zero(m + 1, tab.cols + 1);
    tab.basis.assign(static_cast<std::size_t>(m), -1);
    tab.t.block(0, 0, m, structural) = a;
    tab.t.block(0, tab.cols, m, 1) = b;
    int next_art = structural;
    for (int i = 0; i < m; ++i) {
        if (needs_artificial[static_cast<std::size_t>(i)]) {
            tab.t(i, next_art) = 1.0;
            tab.basis[static_cast<std::size_t>(i)] = next_art++;
        } else {
            tab.basis[static_cast<std::size_t>(i)] = 2 * n + (i - me);
        }
    }

    const double feas_tol = 1e-9 * (1.0 + (m > 0 ? b.cwiseAbs().maxCoeff() : 0.0));
    if (n_art > 0) {
        Vector phase1 = Vector::Zero(tab.cols);
        phase1.tail(n_art).setConstant(-1.0);
        tab.set_objective(phase1);
        tab.run(tab.cols, max_pivots);
        if (tab.t(m, tab.cols) < -feas_tol) {
            LpResult r;
            r.status = LpStatus::infeasible;
            r.pivots = tab.pivots;
            return r;
        }
        // Drive zero-level artificials out of the basis where possible.
        for (int i = 0; i < m; ++i) {
            if (tab.basis[static_cast<std::size_t>(i)] < structural) continue;
            for (int j = 0; j < structural; ++j) {
                if (std::abs(tab.t(i, j)) > 1e-9) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
    }

    Vector cost = Vector::Zero(tab.cols);
    cost.head(n) = lp.objective;
    cost.segment(n, n) = -lp.objective;
    tab.set_objective(cost);
    if (!tab.run(structural, max_pivots)) {
        LpResult r;
        r.status = LpStatus::unbounded;
        r.pivots = tab.pivots;
        return r;
    }

    // Recompute the basic solution from the original data.
    Matrix full(m, tab.cols);
    full.leftCols(structural) = a;
    {
        int col = structural;
        for (int i = 0; i < m; ++i) {
            if (!needs_artificial[static_cast<std::size_t>(i)]) continue;
            full.col(col).setZero();
            full(i, col) = 1.0;
            ++col;
        }
    }
    Vector z = Vector::Zero(tab.cols);
    if (m > 0) {
        Matrix basic(m, m);
        for (int i = 0; i < m; ++i) basic.col(i) = full.col(tab.basis[static_cast<std::size_t>(i)]);
        Eigen::FullPivLU<Matrix> lu(basic);
        Vector xb = lu.isInvertible() ? Vector(lu.solve(b)) : Vector(tab.t.block(0, tab.cols, m, 1));
        for (int i = 0; i < m; ++i) z(tab.basis[static_cast<std::size_t>(i)]) = xb(i);
    }

    LpResult r;
    r.status = LpStatus::optimal;
    r.solution = z.head(n) - z.segment(n, n);
    r.value = lp.objective.dot(r.solution);
    r.pivots = tab.pivots;
    return r;
}

}  // namespace adjbai::geometry
