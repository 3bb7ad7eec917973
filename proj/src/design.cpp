#include "adjbai/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace adjbai::design {

SpdFactor::SpdFactor(const Matrix& a) {
    Matrix sym = 0.5 * (a + a.transpose());
    llt_.compute(sym);
    bool suspicious = llt_.info() != Eigen::Success;
    if (!suspicious) {
        const Vector diag = llt_.matrixLLT().diagonal();
        const double ratio = diag.maxCoeff() / diag.minCoeff();
        suspicious = !(ratio * ratio < 1e10) || diag.minCoeff() * diag.minCoeff() <= kMinEigenvalue * 10;
    }
    if (!suspicious) return;

    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > kMinEigenvalue)) throw SingularMatrix("matrix is not positive definite", lo);
    if (hi / lo > kRidgeCondition) {
        sym.diagonal().array() += kRidge;
        ridged_ = true;
    }
    llt_.compute(sym);
    if (llt_.info() != Eigen::Success) throw SingularMatrix("Cholesky factorization failed", lo);
}

double SpdFactor::inv_quad(const Vector& z) const {
    const Vector half = llt_.matrixL().solve(z);
    return half.squaredNorm();
}

DirectionSet::DirectionSet(std::vector<Vector> directions) : dirs_(std::move(directions)) {
    if (dirs_.empty()) throw InvalidInput("direction set is empty");
    const auto d = dirs_.front().size();
    for (const auto& y : dirs_) {
        if (y.size() != d) throw InvalidInput("directions have inconsistent dimension");
        if (y.isZero(0.0)) throw InvalidInput("direction set contains a zero direction");
    }
}

Matrix DirectionSet::as_columns() const {
    Matrix m(dirs_.front().size(), static_cast<Eigen::Index>(dirs_.size()));
    for (std::size_t i = 0; i < dirs_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = dirs_[i];
    return m;
}

DirectionSet arm_directions(const ArmSet& arms) { return DirectionSet(arms.arms()); }

DirectionSet pair_directions(const ArmSet& arms, const std::vector<geometry::ArmPair>& pairs) {
    std::vector<Vector> dirs;
    dirs.reserve(pairs.size());
    for (const auto& [a, b] : pairs) dirs.push_back(arms[a] - arms[b]);
    return DirectionSet(std::move(dirs));
}

std::vector<geometry::ArmPair> extreme_pairs(const geometry::AdjacencyStructure& adj) {
    std::vector<geometry::ArmPair> out;
    const auto& v = adj.extreme_points;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) out.emplace_back(v[i], v[j]);
    }
    return out;
}

Matrix design_matrix(const ArmSet& arms, const std::vector<double>& weights) {
    if (weights.size() != arms.size()) throw InvalidInput("weight vector length differs from arm count");
    Matrix a = Matrix::Zero(arms.dim(), arms.dim());
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (weights[i] != 0.0) a.selfadjointView<Eigen::Lower>().rankUpdate(arms[i], weights[i]);
    }
    return a.selfadjointView<Eigen::Lower>();
}

double mahalanobis_sq(const Vector& z, const Matrix& a, bool* ridged) {
    const SpdFactor f(a);
    if (ridged != nullptr) *ridged = f.ridged();
    return f.inv_quad(z);
}

double max_variance(const DirectionSet& dirs, const Matrix& a) {
    const SpdFactor f(a);
    double m = 0.0;
    for (const auto& y : dirs.directions()) m = std::max(m, f.inv_quad(y));
    return m;
}

namespace {

// Variances y' A^{-1} y for every direction (columns of dirs) together with
// the solves U = A^{-1} dirs.
struct VarianceEval {
    Matrix solves;
    Vector variances;
};

VarianceEval evaluate(const SpdFactor& f, const Matrix& dirs) {
    VarianceEval e;
    e.solves = f.solve(dirs);
    e.variances = dirs.cwiseProduct(e.solves).colwise().sum().transpose();
    return e;
}

Vector softmax_weights(const Vector& g, double scale) {
    const double top = g.maxCoeff();
    Vector w = ((g.array() - top) / scale).exp().matrix();
    return w / w.sum();
}

struct LineSearch {
    const Matrix& a;
    const Matrix& dirs;
    Matrix slope;   // dA/dgamma
    double scale;   // smoothing temperature, fixed over the search

    // Derivative of the smoothed objective at gamma; +inf when A(gamma) is not PD.
    double derivative(double gamma) const {
        const Matrix ag = a + gamma * slope;
        Eigen::LLT<Matrix> llt(ag);
        if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
        const Matrix u = llt.solve(dirs);
        const Vector g = dirs.cwiseProduct(u).colwise().sum().transpose();
        if (!g.allFinite()) return std::numeric_limits<double>::infinity();
        const Vector w = softmax_weights(g, scale);
        const Vector dg = -(u.cwiseProduct(slope * u)).colwise().sum().transpose();
        return w.dot(dg);
    }

    double run(double gamma_max) const {
        if (derivative(gamma_max) <= 0.0) return gamma_max;
        double lo = 0.0;
        double hi = gamma_max;
        for (int it = 0; it < 60 && hi - lo > 1e-13 * gamma_max; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (derivative(mid) <= 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return lo;
    }
};

SpdFactor factor_iterate(const Matrix& a) {
    try {
        return SpdFactor(a);
    } catch (const SingularMatrix& e) {
        throw NumericalFailure(std::string("design solver reached a singular iterate: ") + e.what());
    }
}

Design frank_wolfe(const ArmSet& arms, const DirectionSet& dirs, const SolverOptions& opts) {
    const std::size_t k = arms.size();
    const Matrix x = arms.as_matrix().transpose();  // d x K
    const Matrix y = dirs.as_columns();             // d x m

    std::vector<double> lambda(k, 1.0 / static_cast<double>(k));
    Design out;
    out.objective = std::numeric_limits<double>::infinity();
    out.lower_bound = 0.0;
    double temperature = 10.0;  // objective / smoothing scale
    bool ridged = false;

    for (int iter = 0;; ++iter) {
        const Matrix a = design_matrix(arms, lambda);
        const SpdFactor factor = factor_iterate(a);
        ridged = ridged || factor.ridged();
        const VarianceEval ev = evaluate(factor, y);
        const double f = ev.variances.maxCoeff();
        if (f < out.objective) {
            out.objective = f;
            out.weights = lambda;
            out.design_matrix = a;
        }

        const double scale = f / temperature;
        const Vector w = softmax_weights(ev.variances, scale);
        // h_x = sum_y w_y (u_y' x)^2
        const Matrix proj = ev.solves.transpose() * x;  // m x K
        const Vector h = (proj.cwiseProduct(proj).transpose() * w);
        const double avg = w.dot(ev.variances);
        Eigen::Index s = 0;
        const double hmax = h.maxCoeff(&s);
        out.lower_bound = std::max(out.lower_bound, 2.0 * avg - hmax);
        out.duality_gap = std::max(0.0, out.objective - out.lower_bound);
        out.objective_trace.push_back(out.objective);
        out.iterations = iter;

        if (out.duality_gap <= opts.tol * out.objective) {
            out.converged = true;
            break;
        }
        if (iter >= opts.max_iter) break;

        const double fw_gap = hmax - avg;
        if (fw_gap <= 0.5 * (f - avg) && temperature < 1e8) {
            temperature *= 2.0;
            continue;
        }

        // Away vertex: smallest h on the support.
        std::size_t away = k;
        for (std::size_t i = 0; i < k; ++i) {
            if (lambda[i] > 0.0 && (away == k || h(static_cast<Eigen::Index>(i)) < h(static_cast<Eigen::Index>(away)))) {
                away = i;
            }
        }
        const double away_gap = avg - h(static_cast<Eigen::Index>(away));
        const auto su = static_cast<std::size_t>(s);

        if (fw_gap >= away_gap || lambda[away] >= 1.0) {
            const Vector& xs = arms[su];
            LineSearch ls{a, y, xs * xs.transpose() - a, scale};
            double gamma = ls.run(1.0);
            if (!(gamma > 0.0)) gamma = 2.0 / (iter + 2.0);
            for (auto& l : lambda) l *= (1.0 - gamma);
            lambda[su] += gamma;
        } else {
            const Vector& xa = arms[away];
            const double gamma_max = lambda[away] / (1.0 - lambda[away]);
            LineSearch ls{a, y, a - xa * xa.transpose(), scale};
            const double gamma = ls.run(gamma_max);
            for (auto& l : lambda) l *= (1.0 + gamma);
            lambda[away] -= gamma;
            if (gamma >= gamma_max || lambda[away] < 0.0) lambda[away] = 0.0;
        }
        const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
        for (auto& l : lambda) l /= total;
    }
    out.ridge_applied = ridged;
    return out;
}

// Barrier objective tau * t - sum_y log(t - g_y) - sum_x log(lambda_x) and its
// derivatives with respect to (lambda, t).
struct BarrierPoint {
    Vector lambda;
    double t = 0.0;
    Matrix a;
    Vector g;       // direction variances
    Matrix p;       // m x K, y' A^{-1} x
    Matrix gram;    // K x K, x' A^{-1} x'
    Vector r;       // 1 / (t - g_y)
    double value = 0.0;
    bool ridged = false;
};

bool evaluate_barrier(const ArmSet& arms, const Matrix& x, const Matrix& y, double tau, BarrierPoint& pt,
                      bool derivatives) {
    if (pt.lambda.minCoeff() <= 0.0) return false;
    const std::vector<double> lv(pt.lambda.data(), pt.lambda.data() + pt.lambda.size());
    pt.a = design_matrix(arms, lv);
    Eigen::LLT<Matrix> llt(pt.a);
    if (llt.info() != Eigen::Success) return false;
    const Matrix u = llt.solve(y);
    pt.g = y.cwiseProduct(u).colwise().sum().transpose();
    if (!pt.g.allFinite() || pt.t <= pt.g.maxCoeff()) return false;
    pt.r = (pt.t - pt.g.array()).inverse().matrix();
    pt.value = tau * pt.t + pt.r.array().log().sum() - pt.lambda.array().log().sum();
    if (derivatives) {
        pt.p = u.transpose() * x;
        pt.gram = x.transpose() * llt.solve(x);
    }
    return true;
}

Design barrier(const ArmSet& arms, const DirectionSet& dirs, const SolverOptions& opts) {
    const auto k = static_cast<Eigen::Index>(arms.size());
    const Matrix x = arms.as_matrix().transpose();
    const Matrix y = dirs.as_columns();
    const auto m = y.cols();

    Design out;
    out.objective = std::numeric_limits<double>::infinity();

    BarrierPoint pt;
    pt.lambda = Vector::Constant(k, 1.0 / static_cast<double>(k));
    {
        const SpdFactor f0 = factor_iterate(design_matrix(arms, std::vector<double>(arms.size(), 1.0 / k)));
        out.ridge_applied = f0.ridged();
        pt.t = 2.0 * evaluate(f0, y).variances.maxCoeff();
    }
    const double constraints = static_cast<double>(m + k);
    double tau = constraints / pt.t;
    if (!evaluate_barrier(arms, x, y, tau, pt, true)) throw NumericalFailure("design solver failed to start");
    out.objective = pt.g.maxCoeff();
    out.weights.assign(pt.lambda.data(), pt.lambda.data() + k);
    out.design_matrix = pt.a;

    int steps = 0;
    for (;;) {
        // Centering by equality-constrained Newton steps.
        for (int inner = 0; inner < 200 && steps < opts.max_iter; ++inner) {
            const Matrix p2 = pt.p.cwiseProduct(pt.p);
            const Vector r2 = pt.r.cwiseProduct(pt.r);
            Vector grad(k + 1);
            grad.head(k) = -(p2.transpose() * pt.r) - pt.lambda.cwiseInverse();
            grad(k) = tau - pt.r.sum();

            Matrix kkt = Matrix::Zero(k + 2, k + 2);
            Matrix h_ll = p2.transpose() * r2.asDiagonal() * p2;
            h_ll += 2.0 * (pt.p.transpose() * pt.r.asDiagonal() * pt.p).cwiseProduct(pt.gram);
            h_ll.diagonal() += pt.lambda.cwiseProduct(pt.lambda).cwiseInverse();
            kkt.topLeftCorner(k, k) = h_ll;
            const Vector h_lt = p2.transpose() * r2;
            kkt.block(0, k, k, 1) = h_lt;
            kkt.block(k, 0, 1, k) = h_lt.transpose();
            kkt(k, k) = r2.sum();
            kkt.block(0, k + 1, k, 1).setOnes();
            kkt.block(k + 1, 0, 1, k).setOnes();
            Vector rhs = Vector::Zero(k + 2);
            rhs.head(k + 1) = -grad;
            const Vector sol = kkt.partialPivLu().solve(rhs);
            const Vector step = sol.head(k + 1);
            const double slope = grad.dot(step);
            ++steps;
            if (!step.allFinite() || -slope <= 1e-10) break;

            double alpha = 1.0;
            BarrierPoint trial;
            bool moved = false;
            for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
                trial.lambda = pt.lambda + alpha * step.head(k);
                trial.t = pt.t + alpha * step(k);
                if (evaluate_barrier(arms, x, y, tau, trial, false) &&
                    trial.value <= pt.value + 0.25 * alpha * slope) {
                    moved = true;
                    break;
                }
            }
            if (!moved) break;
            evaluate_barrier(arms, x, y, tau, trial, true);
            pt = std::move(trial);
            const double f = pt.g.maxCoeff();
            if (f < out.objective) {
                out.objective = f;
                out.weights.assign(pt.lambda.data(), pt.lambda.data() + k);
                out.design_matrix = pt.a;
            }
            out.objective_trace.push_back(out.objective);
            if (-slope < 1e-9) break;
        }

        // Central-path dual weights certify a lower bound.
        const Vector w = pt.r / pt.r.sum();
        const Vector h = pt.p.cwiseProduct(pt.p).transpose() * w;
        out.lower_bound = std::max(out.lower_bound, 2.0 * w.dot(pt.g) - h.maxCoeff());
        out.duality_gap = std::max(0.0, out.objective - out.lower_bound);
        out.iterations = steps;
        if (out.duality_gap <= opts.tol * out.objective) {
            out.converged = true;
            break;
        }
        if (steps >= opts.max_iter || tau > 1e14 * constraints / out.objective) break;
        tau *= 8.0;
        evaluate_barrier(arms, x, y, tau, pt, true);
    }
    for (double& l : out.weights) l = std::max(l, 0.0);
    return out;
}

}  // namespace

Design minmax_design(const ArmSet& arms, const DirectionSet& dirs, const SolverOptions& opts) {
    if (dirs[0].size() != arms.dim()) throw InvalidInput("directions and arms differ in dimension");
    if (opts.method == SolverMethod::frank_wolfe) return frank_wolfe(arms, dirs, opts);
    return barrier(arms, dirs, opts);
}

Design g_optimal(const ArmSet& arms, const SolverOptions& opts) {
    return minmax_design(arms, arm_directions(arms), opts);
}

Design xy_optimal(const ArmSet& arms, const geometry::AdjacencyStructure& adj, const SolverOptions& opts) {
    return minmax_design(arms, pair_directions(arms, extreme_pairs(adj)), opts);
}

Design adjacent_optimal(const ArmSet& arms, const geometry::AdjacencyStructure& adj,
                        const SolverOptions& opts) {
    return minmax_design(arms, pair_directions(arms, adj.adjacent_pairs), opts);
}

KieferWolfowitzResult kiefer_wolfowitz_check(const ArmSet& arms, double tol, const SolverOptions& opts) {
    const Design g = g_optimal(arms, opts);
    KieferWolfowitzResult r;
    r.value = g.objective;
    const double d = arms.dim();
    r.relative_error = std::abs(g.objective - d) / d;
    r.pass = r.relative_error <= tol;
    return r;
}

std::vector<double> prune_weights(const std::vector<double>& weights) {
    std::vector<double> out(weights.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] >= kPruneThreshold) {
            out[i] = weights[i];
            total += weights[i];
        }
    }
    if (total <= 0.0) throw InvalidInput("design has no weight above the pruning threshold");
    for (auto& w : out) w /= total;
    return out;
}

std::vector<double> reduce_support(const ArmSet& arms, const std::vector<double>& weights) {
    const int d = arms.dim();
    const int rows = 1 + d * (d + 1) / 2;
    std::vector<double> lambda = weights;
    for (;;) {
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            if (lambda[i] > 0.0) support.push_back(i);
        }
        const int p = static_cast<int>(support.size());
        if (p <= rows) break;
        Matrix m(rows, p);
        for (int c = 0; c < p; ++c) {
            const Vector& xv = arms[support[static_cast<std::size_t>(c)]];
            int r = 0;
            m(r++, c) = 1.0;
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) m(r++, c) = xv(i) * xv(j);
            }
        }
        // p > rows, so the last right singular vector spans part of the kernel.
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
        Vector null = svd.matrixV().col(p - 1);
        if (null.maxCoeff() <= 0.0) null = -null;
        double step = std::numeric_limits<double>::infinity();
        int drop = -1;
        for (int c = 0; c < p; ++c) {
            if (null(c) > 1e-14) {
                const double t = lambda[support[static_cast<std::size_t>(c)]] / null(c);
                if (t < step) {
                    step = t;
                    drop = c;
                }
            }
        }
        for (int c = 0; c < p; ++c) lambda[support[static_cast<std::size_t>(c)]] -= step * null(c);
        lambda[support[static_cast<std::size_t>(drop)]] = 0.0;
        double total = 0.0;
        for (auto& l : lambda) {
            if (l < 0.0) l = 0.0;
            total += l;
        }
        for (auto& l : lambda) l /= total;
    }
    return lambda;
}

std::vector<int> apportion(const std::vector<double>& weights, int total) {
    if (total < 1) throw InvalidInput("allocation total must be positive");
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) support.push_back(i);
    }
    if (support.empty()) throw InvalidInput("cannot apportion an empty design");
    const double p = static_cast<double>(support.size());
    std::vector<int> n(weights.size(), 0);
    long sum = 0;
    for (std::size_t i : support) {
        n[i] = static_cast<int>(std::ceil((total - p / 2.0) * weights[i]));
        n[i] = std::max(n[i], 0);
        sum += n[i];
    }
    while (sum > total) {
        std::size_t best = support.front();
        double best_v = -std::numeric_limits<double>::infinity();
        for (std::size_t i : support) {
            if (n[i] == 0) continue;
            const double v = (n[i] - 1) / weights[i];
            if (v > best_v) {
                best_v = v;
                best = i;
            }
        }
        --n[best];
        --sum;
    }
    while (sum < total) {
        std::size_t best = support.front();
        double best_v = std::numeric_limits<double>::infinity();
        for (std::size_t i : support) {
            const double v = n[i] / weights[i];
            if (v < best_v) {
                best_v = v;
                best = i;
            }
        }
        ++n[best];
        ++sum;
    }
    return n;
}

Allocation round_design(const ArmSet& arms, const Design& design, const DirectionSet& guard, int total,
                        const Apportioner& rule) {
    const int d = arms.dim();
    if (total < d * d) {
        throw InvalidInput("budget T = " + std::to_string(total) + " is below d^2 = " + std::to_string(d * d));
    }
    const std::vector<double> lambda = reduce_support(arms, prune_weights(design.weights));
    Allocation alloc;
    alloc.total = total;
    alloc.counts = rule ? rule(lambda, total) : apportion(lambda, total);
    if (std::accumulate(alloc.counts.begin(), alloc.counts.end(), 0) != total) {
        throw NumericalFailure("apportionment does not sum to T");
    }
    std::vector<double> freq(alloc.counts.size());
    for (std::size_t i = 0; i < freq.size(); ++i) freq[i] = static_cast<double>(alloc.counts[i]) / total;
    alloc.empirical_matrix = design_matrix(arms, freq);

    const double ideal = max_variance(guard, design.design_matrix);
    const double empirical = max_variance(guard, alloc.empirical_matrix);
    alloc.rounding_factor = empirical / ideal;
    if (!(alloc.rounding_factor <= 2.0 + 1e-9)) {
        throw NumericalFailure("rounding guarantee violated: factor " + std::to_string(alloc.rounding_factor) +
                               " at T = " + std::to_string(total));
    }
    return alloc;
}

std::vector<std::size_t> allocation_sequence(const Allocation& alloc) {
    std::vector<std::size_t> seq;
    seq.reserve(static_cast<std::size_t>(alloc.total));
    for (std::size_t i = 0; i < alloc.counts.size(); ++i) {
        seq.insert(seq.end(), static_cast<std::size_t>(alloc.counts[i]), i);
    }
    return seq;
}

}  // namespace adjbai::design
