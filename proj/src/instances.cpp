#include "adjbai/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace adjbai::instances {

std::string to_string(Noise n) { return n == Noise::gauss1 ? "gauss1" : "subgauss1"; }

Noise noise_from_string(const std::string& s) {
    if (s == "gauss1") return Noise::gauss1;
    if (s == "subgauss1") return Noise::subgauss1;
    throw InvalidInput("unknown noise tag '" + s + "'");
}

NonStationaryInstance NonStationaryInstance::explicit_form(ArmSet arms, std::vector<Vector> thetas, Noise noise,
                                                           bool zero_noise,
                                                           std::optional<std::vector<std::size_t>> extreme) {
    if (thetas.empty()) throw InvalidInput("parameter sequence is empty");
    for (const auto& t : thetas) {
        if (t.size() != arms.dim()) throw InvalidInput("parameter dimension differs from arm dimension");
        if (!t.allFinite()) throw InvalidInput("parameter sequence has non-finite entries");
    }
    NonStationaryInstance inst;
    inst.arms_ = std::move(arms);
    inst.horizon_ = static_cast<int>(thetas.size());
    inst.thetas_ = std::move(thetas);
    inst.noise_ = noise;
    inst.zero_noise_ = zero_noise;
    inst.theta_bar_ = Vector::Zero(inst.arms_.dim());
    for (const auto& t : inst.thetas_) inst.theta_bar_ += t;
    inst.theta_bar_ /= static_cast<double>(inst.horizon_);
    inst.finish(std::move(extreme));
    return inst;
}

NonStationaryInstance NonStationaryInstance::two_phase(ArmSet arms, int horizon, Vector phase1, Vector phase2,
                                                       Noise noise, bool zero_noise,
                                                       std::optional<std::vector<std::size_t>> extreme) {
    if (horizon < 2 || horizon % 2 != 0) throw InvalidInput("two-phase horizon must be a positive even integer");
    if (phase1.size() != arms.dim() || phase2.size() != arms.dim()) {
        throw InvalidInput("phase parameter dimension differs from arm dimension");
    }
    if (!phase1.allFinite() || !phase2.allFinite()) throw InvalidInput("phase parameters must be finite");
    NonStationaryInstance inst;
    inst.arms_ = std::move(arms);
    inst.horizon_ = horizon;
    inst.two_phase_ = true;
    inst.phase1_ = std::move(phase1);
    inst.phase2_ = std::move(phase2);
    inst.noise_ = noise;
    inst.zero_noise_ = zero_noise;
    inst.theta_bar_ = 0.5 * (inst.phase1_ + inst.phase2_);
    const Matrix xm = inst.arms_.as_matrix();
    inst.phase_means_.resize(xm.rows(), 2);
    inst.phase_means_.col(0) = xm * inst.phase1_;
    inst.phase_means_.col(1) = xm * inst.phase2_;
    inst.finish(std::move(extreme));
    return inst;
}

NonStationaryInstance NonStationaryInstance::stationary(ArmSet arms, int horizon, Vector theta, Noise noise,
                                                        bool zero_noise) {
    if (horizon % 2 != 0) {
        return explicit_form(std::move(arms), std::vector<Vector>(static_cast<std::size_t>(horizon), theta), noise,
                             zero_noise);
    }
    Vector copy = theta;
    return two_phase(std::move(arms), horizon, std::move(theta), std::move(copy), noise, zero_noise);
}

void NonStationaryInstance::finish(std::optional<std::vector<std::size_t>> extreme) {
    extreme_ = extreme ? std::move(*extreme) : geometry::compute_extreme_points(arms_);
    if (extreme_.empty()) throw InvalidInput("instance has no extreme points");
    std::size_t best = extreme_.front();
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i : extreme_) {
        const double v = arms_[i].dot(theta_bar_);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i : extreme_) {
        if (i != best) gap = std::min(gap, best_value - arms_[i].dot(theta_bar_));
    }
    if (!(gap > 0.0)) throw InvalidInput("instance has no unique best arm (min gap " + std::to_string(gap) + ")");
    best_arm_ = best;
    min_gap_ = gap;
}

Vector NonStationaryInstance::theta(int t) const {
    if (t < 0 || t >= horizon_) throw InvalidInput("time index out of range");
    if (!two_phase_) return thetas_[static_cast<std::size_t>(t)];
    return t < horizon_ / 2 ? phase1_ : phase2_;
}

double NonStationaryInstance::mean_reward(std::size_t arm, int t) const {
    if (two_phase_) return phase_means_(static_cast<Eigen::Index>(arm), t < horizon_ / 2 ? 0 : 1);
    return arms_[arm].dot(thetas_[static_cast<std::size_t>(t)]);
}

double NonStationaryInstance::max_theta_norm() const {
    if (two_phase_) return std::max(phase1_.norm(), phase2_.norm());
    double m = 0.0;
    for (const auto& t : thetas_) m = std::max(m, t.norm());
    return m;
}

bool NonStationaryInstance::in_unit_regime(double slack) const {
    return arms_.max_norm() <= 1.0 + slack && max_theta_norm() <= 1.0 + slack;
}

NonStationaryInstance NonStationaryInstance::with_horizon(int horizon) const {
    if (!two_phase_) throw InvalidInput("only two-phase instances can change horizon");
    return two_phase(arms_, horizon, phase1_, phase2_, noise_, zero_noise_, extreme_);
}

HardInstancePair construct_hard_pair_unit_regime(const ArmSet& arms, const geometry::AdjacencyStructure& adj,
                                                 std::size_t x, std::size_t x_prime,
                                                 const std::vector<double>& lambda, double gap, int horizon,
                                                 Noise noise) {
    HardInstancePair hp = construct_hard_pair(arms, adj, x, x_prime, lambda, gap, horizon, noise);
    if (hp.max_theta_norm <= 1.0) return hp;
    return construct_hard_pair(arms, adj, x, x_prime, lambda, gap * (1.0 - 1e-12) / hp.max_theta_norm, horizon, noise);
}

PairSlack pair_constraint_slack(const ArmSet& arms, const std::vector<std::size_t>& extreme, std::size_t x,
                                std::size_t x_prime, const Vector& theta, const Vector& v, double gap) {
    PairSlack s{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const Vector shifted = theta + v;
    for (std::size_t y : extreme) {
        if (y != x) s.first = std::min(s.first, (arms[x] - arms[y]).dot(theta) - gap);
        if (y != x_prime) s.second = std::min(s.second, (arms[x_prime] - arms[y]).dot(shifted) - gap);
    }
    return s;
}

HardInstancePair construct_hard_pair(const ArmSet& arms, const geometry::AdjacencyStructure& adj, std::size_t x,
                                     std::size_t x_prime, const std::vector<double>& lambda, double gap,
                                     int horizon, Noise noise) {
    if (!(gap > 0.0)) throw InvalidInput("gap must be positive");
    if (horizon < 2 || horizon % 2 != 0) throw InvalidInput("hard pair horizon must be a positive even integer");
    if (x == x_prime || !adj.is_adjacent(x, x_prime)) {
        throw InvalidInput("arms " + std::to_string(x) + " and " + std::to_string(x_prime) + " are not adjacent");
    }
    const auto witness = adj.edge_witness.find(geometry::make_pair_sorted(x, x_prime));
    if (witness == adj.edge_witness.end()) throw InvalidInput("adjacent pair has no stored witness");

    const design::SpdFactor factor(design::design_matrix(arms, lambda));
    const Vector diff = arms[x] - arms[x_prime];
    const Vector solved = factor.solve(diff);
    const double norm_sq = diff.dot(solved);
    const double c = gap / norm_sq;

    HardInstancePair hp;
    hp.x = x;
    hp.x_prime = x_prime;
    hp.lambda_used = lambda;
    hp.gap = gap;
    hp.pair_norm_sq = norm_sq;
    hp.v_star = -2.0 * c * solved;

    std::vector<std::size_t> others;
    for (std::size_t y : adj.extreme_points) {
        if (y != x && y != x_prime) others.push_back(y);
    }
    hp.w = witness->second.w;
    hp.edge_margin = witness->second.margin;
    if (others.empty()) {
        hp.alpha = 0.0;
    } else {
        if (!(hp.edge_margin >= 10.0 * geometry::kTolMargin) || !std::isfinite(hp.edge_margin)) {
            double eps = std::numeric_limits<double>::infinity();
            for (std::size_t y : others) eps = std::min(eps, (arms[x] - arms[y]).dot(hp.w));
            if (!(eps > 0.0)) throw NumericalFailure("edge witness does not separate the pair from other vertices");
            hp.edge_margin = eps;
            hp.margin_recomputed = true;
        }
        double min_bx = std::numeric_limits<double>::infinity();
        double max_bxp = -std::numeric_limits<double>::infinity();
        for (std::size_t y : others) {
            min_bx = std::min(min_bx, c * (arms[x] - arms[y]).dot(solved));
            max_bxp = std::max(max_bxp, c * (arms[x_prime] - arms[y]).dot(solved));
        }
        hp.alpha = std::max(0.0, (gap + std::max(-min_bx, max_bxp)) / hp.edge_margin);
    }
    hp.theta_star = c * solved;
    if (hp.alpha > 0.0) hp.theta_star += hp.alpha * hp.w;

    const double tol = 1e-9 * std::max(1.0, gap);
    const PairSlack slack =
        pair_constraint_slack(arms, adj.extreme_points, x, x_prime, hp.theta_star, hp.v_star, gap);
    if (slack.first < -tol || slack.second < -tol) {
        throw NumericalFailure("hard pair violates its constraints (slack " + std::to_string(slack.first) + ", " +
                               std::to_string(slack.second) + ")");
    }

    const std::vector<double> lv = lambda;
    hp.objective = hp.v_star.dot(design::design_matrix(arms, lv) * hp.v_star);
    hp.closed_form = 4.0 * gap * gap / norm_sq;
    if (std::abs(hp.objective - hp.closed_form) > 1e-8 * hp.closed_form) {
        throw NumericalFailure("hard pair objective departs from the closed form");
    }

    const Vector zero = Vector::Zero(arms.dim());
    hp.instance_a = NonStationaryInstance::two_phase(arms, horizon, zero, 2.0 * hp.theta_star, noise, false,
                                                     adj.extreme_points);
    hp.instance_b = NonStationaryInstance::two_phase(arms, horizon, 2.0 * hp.v_star, 2.0 * hp.theta_star, noise,
                                                     false, adj.extreme_points);
    if (hp.instance_a.best_arm() != x || hp.instance_b.best_arm() != x_prime ||
        hp.instance_a.min_gap() < gap - 1e-9 || hp.instance_b.min_gap() < gap - 1e-9) {
        throw NumericalFailure("hard pair instances fail best-arm or min-gap verification");
    }
    hp.max_theta_norm = std::max(hp.instance_a.max_theta_norm(), hp.instance_b.max_theta_norm());
    return hp;
}

std::vector<double> sample_rewards(const NonStationaryInstance& inst, const std::vector<std::size_t>& schedule,
                                   Stream& stream) {
    if (static_cast<int>(schedule.size()) != inst.horizon()) {
        throw InvalidInput("schedule length " + std::to_string(schedule.size()) + " differs from horizon " +
                           std::to_string(inst.horizon()));
    }
    std::vector<double> r(schedule.size());
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        if (schedule[t] >= inst.arms().size()) throw InvalidInput("schedule names an unknown arm");
        double noise = 0.0;
        if (!inst.zero_noise()) {
            noise = inst.noise() == Noise::gauss1 ? stream.normal() : (stream.below(2) == 0 ? -1.0 : 1.0);
        }
        r[t] = inst.mean_reward(schedule[t], static_cast<int>(t)) + noise;
    }
    return r;
}

ArmSet circle_set(int k) {
    if (k < 3) throw InvalidInput("circle set needs K >= 3");
    std::vector<Vector> arms;
    for (int i = 0; i < k; ++i) {
        const double a = 2.0 * std::numbers::pi * i / k;
        arms.push_back(Vector{{std::cos(a), std::sin(a)}});
    }
    return ArmSet(std::move(arms));
}

ArmSet basis_set(int d) {
    if (d < 2) throw InvalidInput("basis set needs d >= 2");
    std::vector<Vector> arms;
    for (int i = 0; i < d; ++i) arms.push_back(Vector::Unit(d, i));
    return ArmSet(std::move(arms));
}

ArmSet square_set() {
    return ArmSet({Vector{{1.0, 1.0}}, Vector{{-1.0, 1.0}}, Vector{{-1.0, -1.0}}, Vector{{1.0, -1.0}}});
}

ArmSet random_polytope_set(int d, int k, std::uint64_t seed) {
    if (d < 1 || k < std::max(2, d)) throw InvalidInput("random polytope needs K >= max(2, d)");
    Stream stream(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Vector> arms;
        for (int i = 0; i < k; ++i) {
            Vector v(d);
            for (int j = 0; j < d; ++j) v(j) = 2.0 * stream.uniform() - 1.0;
            arms.push_back(v);
        }
        try {
            return ArmSet(std::move(arms));
        } catch (const InvalidInput&) {
        }
    }
    throw NumericalFailure("could not draw a spanning arm set");
}

ArmSet scaled_to_unit_ball(const ArmSet& arms) {
    const double m = arms.max_norm();
    std::vector<Vector> scaled;
    for (const auto& a : arms.arms()) scaled.push_back(a / m);
    return ArmSet(std::move(scaled));
}

}  // namespace adjbai::instances
