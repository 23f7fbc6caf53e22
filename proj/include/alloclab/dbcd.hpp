// dbcd.hpp: doubly adaptive biased coin design
// and the two-arm fully randomized biased coin design (RBCD).
#pragma once
#include <span>
#include <vector>

#include "alloclab/core.hpp"
#include "alloclab/matrix.hpp"
#include "alloclab/targets.hpp"

namespace alloclab {

struct DbcdConfig {
    double gamma = 2.0;
    std::size_t burn_in = 2;  // M subjects per arm, assigned round-robin
    EstimatorScheme scheme = kDefaultScheme;

    void validate() const;
};

struct RbcdConfig {
    double alpha = 2.0 / 3.0;
    EstimatorScheme scheme = kDefaultScheme;

    void validate() const;
};

// Estimated target components are clamped to [kTargetClamp, 1 - kTargetClamp].
inline constexpr double kTargetClamp = 1e-6;
inline constexpr double kRbcdTieTolerance = 1e-12;

// g_k(x, y) = y_k (y_k/x_k)^gamma / sum_j y_j (y_j/x_j)^gamma.
// Throws std::domain_error if some x_k <= 0 while gamma > 0, or some y_k <= 0.
std::vector<double> g_alloc(std::span<const double> x, std::span<const double> y, double gamma);

// rho(p_hat) from the resolved outcomes in `state`. p_hat and rho are both
// clamped to [kTargetClamp, 1 - kTargetClamp]; rho is renormalized.
std::vector<double> estimated_target(const TrialState& state, TargetKind target,
                                     EstimatorScheme scheme);

// Allocation probabilities for the next subject. During burn-in (n < M K) this
// is the one-hot vector of the round-robin arm n mod K.
std::vector<double> dbcd_probabilities(const TrialState& state, TargetKind target,
                                       const DbcdConfig& cfg);
Assignment dbcd_next(const TrialState& state, TargetKind target, const DbcdConfig& cfg,
                     RandomStream& rng);

// Three-branch RBCD rule for the probability of arm 0 given the current
// proportion x = N_0 / n and the estimated target rho_hat.
double rbcd_rule(double x, double rho_hat, double alpha, std::size_t n);

// Probability of arm 0 for the next subject; the first two subjects go to
// arms 0 and 1.
double rbcd_probability(const TrialState& state, TargetKind target, const RbcdConfig& cfg);
Assignment rbcd_next(const TrialState& state, TargetKind target, const RbcdConfig& cfg,
                     RandomStream& rng);

// Sigma = Sigma_rho + (diag(v) - v'v + Sigma_rho) / (1 + 2 gamma), with
// Sigma_rho the information lower bound and v = rho(p). gamma = +inf gives Sigma_rho.
Matrix dbcd_variance(TargetKind target, std::span<const double> p, double gamma);

}  // namespace alloclab
