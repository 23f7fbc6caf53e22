#include "alloclab/core.hpp"

#include <cmath>
#include <string>

namespace alloclab {

BernoulliArms::BernoulliArms(std::vector<double> p) : p_(std::move(p)) {
    if (p_.size() < 2 || p_.size() > kMaxArms)
        throw std::invalid_argument("arms: need between 2 and " + std::to_string(kMaxArms) +
                                    " arms, got " + std::to_string(p_.size()));
    for (double pk : p_) {
        if (!(pk > 0.0 && pk < 1.0))
            throw std::invalid_argument("arms: success probability " + std::to_string(pk) +
                                        " outside (0,1)");
    }
}

std::vector<int> Assignment::one_hot(std::size_t arms) const {
    if (arm >= arms) throw std::out_of_range("assignment: arm index out of range");
    std::vector<int> x(arms, 0);
    x[arm] = 1;
    return x;
}

void EstimatorScheme::validate() const {
    if (!(a >= 0.0) || !(b >= 0.0))
        throw std::invalid_argument("estimator: offsets must be nonnegative");
}

TrialState::TrialState(std::size_t arms)
    : assigned_(arms, 0), observed_(arms, 0), successes_(arms, 0) {
    if (arms < 2 || arms > kMaxArms) throw std::invalid_argument("trial: unsupported arm count");
}

std::size_t TrialState::enroll(Assignment a) {
    if (a.arm >= arms()) throw std::out_of_range("record: arm index out of range");
    ++assigned_[a.arm];
    history_.push_back({a, std::nullopt});
    return history_.size() - 1;
}

void TrialState::resolve(std::size_t subject, Outcome o) {
    if (subject >= history_.size()) throw std::out_of_range("resolve: unknown subject");
    SubjectRecord& rec = history_[subject];
    if (rec.outcome) throw std::logic_error("resolve: outcome already recorded");
    rec.outcome = o;
    ++observed_[rec.assignment.arm];
    if (o.success) ++successes_[rec.assignment.arm];
    ++resolved_;
}

void TrialState::record(Assignment a, Outcome o) { resolve(enroll(a), o); }

TrialState record(TrialState state, Assignment arm, Outcome outcome) {
    state.record(arm, outcome);
    return state;
}

ParamEstimate estimate(const TrialState& state, EstimatorScheme scheme) {
    scheme.validate();
    ParamEstimate est{std::vector<double>(state.arms()), scheme};
    for (std::size_t k = 0; k < state.arms(); ++k) {
        const double den = static_cast<double>(state.observed()[k]) + scheme.b;
        if (den <= 0.0)
            throw std::domain_error("estimate: arm " + std::to_string(k) +
                                    " has no observations and the scheme adds nothing");
        est.p_hat[k] = (static_cast<double>(state.successes()[k]) + scheme.a) / den;
    }
    return est;
}

Outcome draw_bernoulli(const BernoulliArms& arms, std::size_t arm, RandomStream& rng) {
    if (arm >= arms.size()) throw std::out_of_range("draw_bernoulli: arm index out of range");
    return Outcome{rng.uniform() < arms.p(arm)};
}

}  // namespace alloclab
