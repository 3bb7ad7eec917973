#pragma once

#include "adjbai/core.hpp"
#include "adjbai/design.hpp"
#include "adjbai/geometry.hpp"
#include "adjbai/random.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace adjbai::instances {

/// gauss1: standard normal noise. subgauss1: a generic 1-sub-Gaussian tag,
/// sampled as Rademacher +-1 noise.
enum class Noise { gauss1, subgauss1 };

std::string to_string(Noise n);
Noise noise_from_string(const std::string& s);

/// A parameter sequence theta_1..theta_T over a fixed arm set.
///
/// The sequence is stored either explicitly or in the compact two-phase form
/// (phase1 for t <= T/2, phase2 afterwards). The best arm is the unique
/// maximizer of x' theta_bar over the extreme points and the min-gap is its
/// smallest advantage over another extreme point.
class NonStationaryInstance {
public:
    /// Empty placeholder; only the factories build usable instances.
    NonStationaryInstance() = default;

    /// Throws InvalidInput when the sequence is empty, has the wrong dimension,
    /// or has no unique best extreme point.
    static NonStationaryInstance explicit_form(ArmSet arms, std::vector<Vector> thetas,
                                               Noise noise = Noise::gauss1, bool zero_noise = false,
                                               std::optional<std::vector<std::size_t>> extreme = {});
    /// T must be even.
    static NonStationaryInstance two_phase(ArmSet arms, int horizon, Vector phase1, Vector phase2,
                                           Noise noise = Noise::gauss1, bool zero_noise = false,
                                           std::optional<std::vector<std::size_t>> extreme = {});
    /// Constant parameter (stationary special case, kept in two-phase form).
    static NonStationaryInstance stationary(ArmSet arms, int horizon, Vector theta,
                                            Noise noise = Noise::gauss1, bool zero_noise = false);

    const ArmSet& arms() const noexcept { return arms_; }
    int horizon() const noexcept { return horizon_; }
    bool is_two_phase() const noexcept { return two_phase_; }
    const Vector& phase1() const { return phase1_; }
    const Vector& phase2() const { return phase2_; }
    const std::vector<Vector>& thetas() const noexcept { return thetas_; }
    /// theta_t with t in [0, T).
    Vector theta(int t) const;
    /// x_arm' theta_t with t in [0, T).
    double mean_reward(std::size_t arm, int t) const;
    Noise noise() const noexcept { return noise_; }
    bool zero_noise() const noexcept { return zero_noise_; }

    const Vector& theta_bar() const noexcept { return theta_bar_; }
    std::size_t best_arm() const noexcept { return best_arm_; }
    double min_gap() const noexcept { return min_gap_; }
    const std::vector<std::size_t>& extreme_points() const noexcept { return extreme_; }
    double max_theta_norm() const;
    /// max arm norm <= 1 and every ||theta_t|| <= 1.
    bool in_unit_regime(double slack = 1e-12) const;

    /// Same parameters at a new horizon. Only valid for the two-phase form.
    NonStationaryInstance with_horizon(int horizon) const;

private:
    void finish(std::optional<std::vector<std::size_t>> extreme);

    ArmSet arms_;
    int horizon_ = 0;
    bool two_phase_ = false;
    Vector phase1_;
    Vector phase2_;
    std::vector<Vector> thetas_;
    Noise noise_ = Noise::gauss1;
    bool zero_noise_ = false;
    Vector theta_bar_;
    std::size_t best_arm_ = 0;
    double min_gap_ = 0.0;
    std::vector<std::size_t> extreme_;
    Matrix phase_means_;  // K x 2 for the two-phase form
};

/// Two instances sharing X and T whose best arms differ, built from the
/// closed-form solution of the relaxed lower-bound program.
struct HardInstancePair {
    NonStationaryInstance instance_a;  // best arm x
    NonStationaryInstance instance_b;  // best arm x'
    std::size_t x = 0;
    std::size_t x_prime = 0;
    std::vector<double> lambda_used;
    double gap = 0.0;
    Vector v_star;
    Vector theta_star;
    Vector w;                  // edge witness
    double edge_margin = 0.0;  // eps used for alpha
    bool margin_recomputed = false;
    double alpha = 0.0;
    double pair_norm_sq = 0.0;  // ||x - x'||^2 in A(lambda)^{-1}
    double objective = 0.0;     // v*' A(lambda) v*
    double closed_form = 0.0;   // 4 gap^2 / pair_norm_sq
    double max_theta_norm = 0.0;
};

/// Throws InvalidInput when the pair is not adjacent, T is odd or the gap is
/// not positive; SingularMatrix when A(lambda) is singular; NumericalFailure
/// when post-verification of the constraints fails.
HardInstancePair construct_hard_pair(const ArmSet& arms, const geometry::AdjacencyStructure& adj,
                                     std::size_t x, std::size_t x_prime, const std::vector<double>& lambda,
                                     double gap, int horizon, Noise noise = Noise::gauss1);

/// Same construction with the gap shrunk, when needed, so every theta_t has
/// norm at most 1. Parameters scale linearly with the gap, so one rescale
/// suffices; the gap actually used is reported in the result.
HardInstancePair construct_hard_pair_unit_regime(const ArmSet& arms, const geometry::AdjacencyStructure& adj,
                                                 std::size_t x, std::size_t x_prime,
                                                 const std::vector<double>& lambda, double gap, int horizon,
                                                 Noise noise = Noise::gauss1);

/// Smallest per-arm constraint slack of each side; negative means violated.
/// first: (x - y)' theta - gap over y in V \ {x}
/// second: (x' - y)' (theta + v) - gap over y in V \ {x'}
struct PairSlack {
    double first = 0.0;
    double second = 0.0;
};
PairSlack pair_constraint_slack(const ArmSet& arms, const std::vector<std::size_t>& extreme, std::size_t x,
                                std::size_t x_prime, const Vector& theta, const Vector& v, double gap);

/// r_t = x_(t)' theta_t + eps_t for t = 1..T.
std::vector<double> sample_rewards(const NonStationaryInstance& inst, const std::vector<std::size_t>& schedule,
                                   Stream& stream);

ArmSet circle_set(int k);
ArmSet basis_set(int d);
/// Square corners (+-1, +-1).
ArmSet square_set();
/// K arms with coordinates uniform in [-1, 1], redrawn until they span R^d.
ArmSet random_polytope_set(int d, int k, std::uint64_t seed);
ArmSet scaled_to_unit_ball(const ArmSet& arms);

}  // namespace adjbai::instances
