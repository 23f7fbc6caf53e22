// asymptotics.hpp: closed-form limiting proportions and asymptotic
// covariances of N_n/n, the information lower bound, and model comparisons.
#pragma once
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alloclab/dbcd.hpp"
#include "alloclab/markov.hpp"
#include "alloclab/matrix.hpp"
#include "alloclab/targets.hpp"

namespace alloclab {

enum class Regime { Normal, DegenerateOrUnknown };

struct AsymptoticSummary {
    std::vector<double> v;
    Matrix sigma2;  // K x K covariance of sqrt(n)(N_n/n - v); empty unless Normal
    Regime regime = Regime::Normal;
    std::string note;

    bool has_variance() const { return regime == Regime::Normal && sigma2.rows() > 0; }
    // Variance of the arm-0 proportion.
    double scalar() const { return sigma2(0, 0); }
};

// [[s, -s], [-s, s]]: the covariance of (N_1, N_2)/n when Var(N_1/n) = s.
Matrix two_arm_matrix(double s);

// Play-the-winner: v = (q2, q1)/(q1+q2), sigma^2 = q1 q2 (p1+p2) / (q1+q2)^3.
AsymptoticSummary var_pw(std::span<const double> p);

// Randomized play-the-winner. Normal only when q1 + q2 > 1/2; otherwise the
// regime is DegenerateOrUnknown and no variance is attached.
AsymptoticSummary var_rpw(std::span<const double> p);

// Drop-the-loser, any K: (I - 1'v)' diag(v_k p_k / q_k) (I - 1'v).
AsymptoticSummary var_dl(std::span<const double> p);

// Two-arm Markov chain design with stay probabilities `params`.
AsymptoticSummary var_mcad(const MarkovParams& params, std::span<const double> p);

// Sigma_LB = J' diag(1 / (rho_k I_k)) J with J = d rho / d p.
Matrix lower_bound(TargetKind target, std::span<const double> p);

// Two-arm closed forms of the lower bound (urn, RSIHR, Neyman).
double closed_form_lower_bound(TargetKind target, double p1, double p2);

enum class VariabilityModel { Seu, Gdl, Dbcd };

// SEU: diag(rho) - rho'rho + 6 Sigma_LB; GDL: 2 Sigma_LB;
// DBCD: (diag(rho) - rho'rho)/(1+2 gamma) + (2+2 gamma)/(1+2 gamma) Sigma_LB.
// gamma is required for DBCD only.
Matrix variability_comparison(VariabilityModel model, TargetKind target, std::span<const double> p,
                          std::optional<double> gamma = std::nullopt);

inline Matrix var_dbcd(TargetKind target, std::span<const double> p, double gamma) {
    return dbcd_variance(target, p, gamma);
}

struct WorkedExample {
    TargetKind target;
    double closed_form;
    double general;
    double abs_diff;
};

// The two-arm closed-form DBCD variances for the urn, Neyman and RSIHR
// targets, each paired with the general matrix evaluation.
std::vector<WorkedExample> worked_examples(std::span<const double> p, double gamma = 2.0);

}  // namespace alloclab
