// urn.hpp: generalized Polya urn designs: randomized play-the-winner, Wei's
// K-treatment urn, the sequential estimation-adjusted (SEU) urn, and spectral
// diagnostics of design matrices.
#pragma once
#include <span>
#include <vector>

#include "alloclab/core.hpp"
#include "alloclab/matrix.hpp"

namespace alloclab {

// Real-valued ball counts; fractional counts are allowed.
struct UrnState {
    std::vector<double> balls;

    static UrnState uniform(std::size_t arms, double per_arm = 1.0) {
        return {std::vector<double>(arms, per_arm)};
    }
    double total() const;
    void validate() const;
};

// Expected ball-addition matrix H; rows sum to one.
struct DesignMatrix {
    Matrix h;
};

struct SpectralInfo {
    std::vector<double> v;  // left principal eigenvector, sums to one
    double lambda = 0.0;    // largest real part among the non-principal eigenvalues
    // lambda < 1/2. The boundary lambda = 1/2 counts as outside.
    bool normality_regime = false;
};

// Draws a ball with replacement: arm k with probability Y_k / |Y|.
// Throws std::domain_error("extinct urn") when the urn is empty.
Assignment draw_arm(const UrnState& urn, RandomStream& rng);

// Randomized play-the-winner (K = 2): success on k adds a type k ball, failure
// adds one of the other type.
UrnState rpw_update(UrnState urn, Assignment arm, Outcome outcome);

// Wei's urn: success adds one type k ball; failure adds 1/(K-1) of every other type.
UrnState wei_update(UrnState urn, Assignment arm, Outcome outcome);

// SEU urn: success adds one type k ball; failure adds p_hat_j / sum_{i != k} p_hat_i
// balls of each type j != k. `estimate` must come from the (S+1)/(N+1) scheme.
UrnState seu_update(UrnState urn, Assignment arm, Outcome outcome, const ParamEstimate& estimate);

// h_kk = p_k, h_kj = q_k / (K-1). Probabilities may sit on the closed interval.
DesignMatrix wei_design_matrix(std::span<const double> p);

// Expected SEU design matrix at parameter x: h_kk = p_k, h_kj = q_k x_j / sum_{i != k} x_i.
DesignMatrix seu_design_matrix(std::span<const double> p, std::span<const double> x);

// v solves vH = v with sum(v) = 1 (power iteration on (H + I)/2); lambda is
// the max real part of the remaining eigenvalues. K = 2 uses closed forms.
// Throws std::invalid_argument for a matrix that is not row-stochastic.
SpectralInfo spectral(const DesignMatrix& design);

}  // namespace alloclab
