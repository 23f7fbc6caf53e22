#include "alloclab/markov.hpp"

#include <stdexcept>

namespace alloclab {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

void check_chain(const ChainCoefficients& c) {
    if (!in_unit(c.alpha) || !in_unit(c.beta))
        throw std::invalid_argument("markov: chain coefficients outside [0,1]");
    if (c.alpha + c.beta >= 2.0)
        throw std::domain_error("degenerate chain: no unique stationary distribution");
}

}  // namespace

void MarkovParams::validate() const {
    if (!in_unit(alpha_s) || !in_unit(alpha_f) || !in_unit(beta_s) || !in_unit(beta_f))
        throw std::invalid_argument("mcad.params: each stay probability must lie in [0,1]");
}

ChainCoefficients compose(const MarkovParams& params, double p1, double p2) {
    params.validate();
    return {p1 * params.alpha_s + (1.0 - p1) * params.alpha_f,
            p2 * params.beta_s + (1.0 - p2) * params.beta_f};
}

Assignment pw_next(Assignment prev_arm, Outcome prev_outcome) {
    if (prev_arm.arm > 1) throw std::out_of_range("pw_next: two-arm rule");
    return prev_outcome.success ? prev_arm : Assignment{1 - prev_arm.arm};
}

Assignment mcad_next(Assignment prev_arm, Outcome prev_outcome, const MarkovParams& params,
                     RandomStream& rng) {
    if (prev_arm.arm > 1) throw std::out_of_range("mcad_next: two-arm rule");
    double stay;
    if (prev_arm.arm == 0)
        stay = prev_outcome.success ? params.alpha_s : params.alpha_f;
    else
        stay = prev_outcome.success ? params.beta_s : params.beta_f;
    return rng.uniform() < stay ? prev_arm : Assignment{1 - prev_arm.arm};
}

double mcad_stationary(const ChainCoefficients& c) {
    check_chain(c);
    return (1.0 - c.beta) / (2.0 - c.alpha - c.beta);
}

double mcad_variance(const ChainCoefficients& c) {
    check_chain(c);
    const double d = 2.0 - c.alpha - c.beta;
    return (1.0 - c.alpha) * (1.0 - c.beta) * (c.alpha + c.beta) / (d * d * d);
}

}  // namespace alloclab
