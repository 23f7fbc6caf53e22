// markov.hpp: play-the-winner and the two-arm Markov chain adaptive design.
#pragma once
#include "alloclab/core.hpp"

namespace alloclab {

// Stay probabilities of the Markov chain adaptive design. alpha_* apply after a
// subject on arm 0, beta_* after a subject on arm 1; *_s after a success and
// *_f after a failure. (1,0,1,0) is play-the-winner, all 1/2 is complete
// randomization.
struct MarkovParams {
    double alpha_s = 1.0;
    double alpha_f = 0.0;
    double beta_s = 1.0;
    double beta_f = 0.0;

    void validate() const;

    static constexpr MarkovParams play_the_winner() { return {1.0, 0.0, 1.0, 0.0}; }
    static constexpr MarkovParams complete_randomization() { return {0.5, 0.5, 0.5, 0.5}; }
};

// Diagonal of the transition matrix P = [[alpha, 1-alpha], [1-beta, beta]].
struct ChainCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
};

// alpha = p1 alpha_s + q1 alpha_f, beta = p2 beta_s + q2 beta_f.
ChainCoefficients compose(const MarkovParams& params, double p1, double p2);

// Same arm after a success, the other arm after a failure.
Assignment pw_next(Assignment prev_arm, Outcome prev_outcome);

// Stays on the previous arm with the matching stay probability. Consumes
// exactly one uniform draw.
Assignment mcad_next(Assignment prev_arm, Outcome prev_outcome, const MarkovParams& params,
                     RandomStream& rng);

// Stationary probability of arm 0: (1 - beta) / (2 - alpha - beta).
// Throws std::domain_error when alpha = beta = 1.
double mcad_stationary(const ChainCoefficients& c);

// (1-alpha)(1-beta)(alpha+beta) / (2-alpha-beta)^3, the CLT variance of N_{n,1}/n.
double mcad_variance(const ChainCoefficients& c);

}  // namespace alloclab
