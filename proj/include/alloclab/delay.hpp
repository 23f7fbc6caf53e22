// delay.hpp: delayed responses: Poisson entries, exponential response times,
// and designs that only ever see outcomes observed before each allocation.
#pragma once
#include <optional>
#include <string>
#include <vector>

#include "alloclab/core.hpp"
#include "alloclab/design.hpp"

namespace alloclab {

// Rates, not means. entry_rate is lambda_0; response_rates[k] is the rate of
// the exponential response time on arm k (infinity = instant response). A
// single response rate is shared by every arm.
struct DelayModel {
    double entry_rate = 1.0;
    std::vector<double> response_rates{1.0};

    double response_rate(std::size_t arm) const;
    void validate(std::size_t arms) const;
};

// Probability that a response on arm k is still outstanding after l further
// entries: (lambda_0 / (lambda_0 + lambda_k))^l.
double mu_kl(const DelayModel& model, std::size_t k, unsigned l);

struct DelayEvent {
    enum class Kind { Entry, Observation };
    Kind kind = Kind::Entry;
    double time = 0.0;  // entry epoch at which the event takes effect
    double due = 0.0;   // response time; equals `time` for entries
    std::size_t subject = 0;
    std::size_t arm = 0;
    bool success = false;
};

struct DelayStats {
    std::vector<std::size_t> pending_at_entry;  // outstanding outcomes seen by each subject
    std::vector<std::size_t> total_successes;   // S_{n,k}, observed or not
    std::size_t terminal_pending = 0;           // outstanding at the (n+1)-th entry
    double terminal_time = 0.0;
    std::vector<DelayEvent> log;                // filled when DelayOptions::audit is set

    // sum_k |S_{n,k} - S^obs_{n,k}|, given the terminal state.
    std::size_t success_gap(const TrialState& terminal) const;
};

struct DelayOptions {
    bool audit = false;
};

struct DelayedTrial {
    TrialState state;  // as seen at the (n+1)-th entry epoch
    DelayStats stats;
};

// Design and outcome draws come from `rng` in the same order as
// simulate_trial; entry and response times come from lane 1 of the same
// stream, so instant responses reproduce the undelayed trajectory.
DelayedTrial run_delayed_trial(const DesignSpec& spec, const BernoulliArms& arms,
                               const DelayModel& model, std::size_t n, RandomStream& rng,
                               DelayOptions options = {});

// Replays an audit log: causality, single delivery and per-arm conservation.
// Returns a description of the first violation.
std::optional<std::string> audit_delay_log(const std::vector<DelayEvent>& log, std::size_t arms);

}  // namespace alloclab
