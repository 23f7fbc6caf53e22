// core.hpp: arms, assignments, trial state and parameter estimation shared by
// every allocation design.
#pragma once
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "alloclab/random.hpp"

namespace alloclab {

// Largest arm count supported anywhere in the library.
inline constexpr std::size_t kMaxArms = 8;

// Success probabilities of K Bernoulli arms; every p_k lies strictly in (0,1).
class BernoulliArms {
public:
    explicit BernoulliArms(std::vector<double> p);

    std::size_t size() const { return p_.size(); }
    double p(std::size_t k) const { return p_.at(k); }
    double q(std::size_t k) const { return 1.0 - p_.at(k); }
    std::span<const double> probabilities() const { return p_; }

private:
    std::vector<double> p_;
};

// One subject's treatment, the one-hot vector X_m stored by index.
struct Assignment {
    std::size_t arm = 0;

    std::vector<int> one_hot(std::size_t arms) const;
    friend bool operator==(Assignment, Assignment) = default;
};

struct Outcome {
    bool success = false;
    friend bool operator==(Outcome, Outcome) = default;
};

struct SubjectRecord {
    Assignment assignment;
    std::optional<Outcome> outcome;  // empty while pending
};

// Shrinkage estimator p_hat_k = (S_k + a) / (N_k + b).
struct EstimatorScheme {
    double a = 1.0;
    double b = 2.0;

    void validate() const;
    friend bool operator==(const EstimatorScheme&, const EstimatorScheme&) = default;
};

inline constexpr EstimatorScheme kDefaultScheme{1.0, 2.0};
inline constexpr EstimatorScheme kUrnUpdateScheme{1.0, 1.0};  // (S+1)/(N+1)
inline constexpr EstimatorScheme kSampleMeanScheme{0.0, 0.0};

struct ParamEstimate {
    std::vector<double> p_hat;
    EstimatorScheme scheme;
};

// Assignment counts N, observed-outcome counts and observed successes S, and the
// full per-subject history. Outcomes may arrive after later subjects enroll;
// S and the estimator only ever see resolved outcomes.
//
// Invariants: sum_k N_k = n = history.size(); S_k <= observed_k <= N_k.
class TrialState {
public:
    explicit TrialState(std::size_t arms);

    std::size_t arms() const { return assigned_.size(); }
    std::size_t n() const { return history_.size(); }
    const std::vector<std::size_t>& assigned() const { return assigned_; }
    const std::vector<std::size_t>& observed() const { return observed_; }
    const std::vector<std::size_t>& successes() const { return successes_; }
    const std::vector<SubjectRecord>& history() const { return history_; }
    std::size_t pending() const { return n() - resolved_; }

    // Adds a subject whose outcome is not yet known; returns its index.
    std::size_t enroll(Assignment a);
    // Attaches the outcome of an enrolled subject. Each subject resolves once.
    void resolve(std::size_t subject, Outcome o);
    // enroll + resolve.
    void record(Assignment a, Outcome o);

    void reserve(std::size_t n) { history_.reserve(n); }

private:
    std::vector<std::size_t> assigned_;
    std::vector<std::size_t> observed_;
    std::vector<std::size_t> successes_;
    std::vector<SubjectRecord> history_;
    std::size_t resolved_ = 0;
};

TrialState record(TrialState state, Assignment arm, Outcome outcome);

// Estimates every arm from resolved outcomes only. Throws std::domain_error if
// an arm has no observations and the scheme has b = 0.
ParamEstimate estimate(const TrialState& state, EstimatorScheme scheme = kDefaultScheme);

// Success with probability p_arm; consumes exactly one uniform draw.
Outcome draw_bernoulli(const BernoulliArms& arms, std::size_t arm, RandomStream& rng);

}  // namespace alloclab
