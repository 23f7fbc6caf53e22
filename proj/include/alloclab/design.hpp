// design.hpp: every allocation rule behind one sequential interface.
//
// A design picks the next arm from what is visible (assignment counts plus the
// outcomes resolved so far) and updates its private state when an outcome
// becomes visible. Immediate-response trials call observe() right after each
// assignment; delayed-response trials call it whenever the outcome arrives.
#pragma once
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "alloclab/core.hpp"
#include "alloclab/dbcd.hpp"
#include "alloclab/markov.hpp"
#include "alloclab/targets.hpp"

namespace alloclab {

enum class DesignKind {
    CompleteRandomization,  // cr
    PlayTheWinner,          // pw
    Markov,                 // mcad
    RandomizedPlayTheWinner,  // rpw
    WeiUrn,                 // wei
    SeuUrn,                 // seu
    DropTheLoser,           // dl
    Dbcd,                   // dbcd
    Rbcd,                   // rbcd
};

DesignKind parse_design(std::string_view name);
std::string_view design_name(DesignKind kind);

struct DesignSpec {
    DesignKind kind = DesignKind::PlayTheWinner;
    std::size_t arms = 2;
    MarkovParams markov = MarkovParams::play_the_winner();
    std::vector<double> urn_initial;       // empty: one ball per arm
    std::vector<std::int64_t> dl_initial;  // empty: one immigration ball, one per arm
    TargetKind target = TargetKind::UrnProportion;
    DbcdConfig dbcd;
    RbcdConfig rbcd;

    // Throws std::invalid_argument naming the offending key.
    void validate() const;
    // The proportion this design converges to, when it is one of the built-in targets.
    std::optional<TargetKind> implied_target() const;
};

class Design {
public:
    virtual ~Design() = default;
    virtual Assignment assign(const TrialState& visible, RandomStream& rng) = 0;
    // Called before `visible` records the outcome.
    virtual void observe(const TrialState& visible, Assignment arm, Outcome outcome) = 0;
    virtual std::vector<double> allocation_probabilities(const TrialState& visible) const = 0;
};

std::unique_ptr<Design> make_design(const DesignSpec& spec);

// A design bound to its visible trial state.
class Trial {
public:
    explicit Trial(const DesignSpec& spec);

    std::size_t enroll(RandomStream& rng);
    void resolve(std::size_t subject, Outcome outcome);

    const TrialState& state() const { return state_; }
    const DesignSpec& spec() const { return spec_; }
    std::vector<double> allocation_probabilities() const;
    void reserve(std::size_t n) { state_.reserve(n); }

private:
    DesignSpec spec_;
    std::unique_ptr<Design> design_;
    TrialState state_;
};

// Immediate-response trial of n subjects: per subject, the design's draws
// followed by one outcome draw, all from `rng`.
TrialState simulate_trial(const DesignSpec& spec, const BernoulliArms& arms, std::size_t n,
                          RandomStream& rng);

}  // namespace alloclab
