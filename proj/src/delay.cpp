#include "alloclab/delay.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace alloclab {

double DelayModel::response_rate(std::size_t arm) const {
    if (response_rates.size() == 1) return response_rates[0];
    return response_rates.at(arm);
}

void DelayModel::validate(std::size_t arms) const {
    if (!(entry_rate > 0.0) || std::isinf(entry_rate))
        throw std::invalid_argument("delay.entry_rate: must be positive and finite");
    if (response_rates.size() != 1 && response_rates.size() != arms)
        throw std::invalid_argument("delay.response_rates: give one shared rate or one per arm");
    for (double r : response_rates)
        if (!(r > 0.0)) throw std::invalid_argument("delay.response_rates: rates must be positive");
}

double mu_kl(const DelayModel& model, std::size_t k, unsigned l) {
    if (l == 0) return 1.0;
    const double rk = model.response_rate(k);
    if (std::isinf(rk)) return 0.0;
    return std::pow(model.entry_rate / (model.entry_rate + rk), static_cast<double>(l));
}

std::size_t DelayStats::success_gap(const TrialState& terminal) const {
    std::size_t gap = 0;
    for (std::size_t k = 0; k < total_successes.size(); ++k)
        gap += total_successes[k] - terminal.successes()[k];
    return gap;
}

namespace {

struct Pending {
    double due;
    std::size_t subject;
    Outcome outcome;
};

struct LaterFirst {
    bool operator()(const Pending& a, const Pending& b) const {
        return std::tie(a.due, a.subject) > std::tie(b.due, b.subject);
    }
};

}  // namespace

DelayedTrial run_delayed_trial(const DesignSpec& spec, const BernoulliArms& arms,
                               const DelayModel& model, std::size_t n, RandomStream& rng,
                               DelayOptions options) {
    if (arms.size() != spec.arms) throw std::invalid_argument("arms.p: arm count does not match the design");
    model.validate(spec.arms);

    RandomStream clock(rng.master_seed(), rng.stream_id(), 1);
    Trial trial(spec);
    trial.reserve(n);
    DelayStats stats;
    stats.pending_at_entry.reserve(n);
    stats.total_successes.assign(spec.arms, 0);

    std::priority_queue<Pending, std::vector<Pending>, LaterFirst> queue;
    double t = 0.0;

    auto deliver_until = [&](double now) {
        while (!queue.empty() && queue.top().due <= now) {
            const Pending ev = queue.top();
            queue.pop();
            if (options.audit)
                stats.log.push_back({DelayEvent::Kind::Observation, now, ev.due, ev.subject,
                                     trial.state().history()[ev.subject].assignment.arm,
                                     ev.outcome.success});
            trial.resolve(ev.subject, ev.outcome);
        }
    };

    for (std::size_t m = 0; m < n; ++m) {
        t += clock.exponential(model.entry_rate);
        deliver_until(t);
        stats.pending_at_entry.push_back(queue.size());
        const std::size_t subject = trial.enroll(rng);
        const std::size_t arm = trial.state().history()[subject].assignment.arm;
        const Outcome o = draw_bernoulli(arms, arm, rng);
        if (o.success) ++stats.total_successes[arm];
        if (options.audit)
            stats.log.push_back({DelayEvent::Kind::Entry, t, t, subject, arm, o.success});
        queue.push({t + clock.exponential(model.response_rate(arm)), subject, o});
    }
    t += clock.exponential(model.entry_rate);
    deliver_until(t);
    stats.terminal_pending = queue.size();
    stats.terminal_time = t;
    return {trial.state(), std::move(stats)};
}

std::optional<std::string> audit_delay_log(const std::vector<DelayEvent>& log, std::size_t arms) {
    std::vector<long> assigned(arms, 0), observed(arms, 0);
    std::vector<int> delivered;
    std::vector<std::size_t> arm_of;
    double last_entry = 0.0;
    for (const DelayEvent& ev : log) {
        if (ev.arm >= arms) return "event with arm out of range";
        if (ev.kind == DelayEvent::Kind::Entry) {
            if (ev.subject != arm_of.size()) return "entries out of order";
            if (ev.time < last_entry) return "entry epochs decrease";
            last_entry = ev.time;
            arm_of.push_back(ev.arm);
            delivered.push_back(0);
            ++assigned[ev.arm];
        } else {
            if (ev.subject >= arm_of.size()) return "outcome observed before its subject entered";
            if (ev.due > ev.time) return "outcome used before its response time";
            if (ev.time < last_entry) return "outcome applied after a later allocation";
            if (ev.arm != arm_of[ev.subject]) return "outcome on the wrong arm";
            if (delivered[ev.subject]++) return "outcome delivered twice";
            ++observed[ev.arm];
        }
        for (std::size_t k = 0; k < arms; ++k)
            if (observed[k] > assigned[k]) return "more outcomes observed than subjects assigned";
    }
    return std::nullopt;
}

}  // namespace alloclab
