#include "alloclab/design.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include "alloclab/drop_loser.hpp"
#include "alloclab/urn.hpp"

namespace alloclab {

namespace {

struct NamedDesign {
    DesignKind kind;
    std::string_view name;
};

constexpr NamedDesign kDesignNames[] = {
    {DesignKind::CompleteRandomization, "cr"},
    {DesignKind::PlayTheWinner, "pw"},
    {DesignKind::Markov, "mcad"},
    {DesignKind::RandomizedPlayTheWinner, "rpw"},
    {DesignKind::WeiUrn, "wei"},
    {DesignKind::SeuUrn, "seu"},
    {DesignKind::DropTheLoser, "dl"},
    {DesignKind::Dbcd, "dbcd"},
    {DesignKind::Rbcd, "rbcd"},
};

class MarkovDesign final : public Design {
public:
    MarkovDesign(MarkovParams params, bool deterministic)
        : params_(params), deterministic_(deterministic) {}

    Assignment assign(const TrialState&, RandomStream& rng) override {
        if (!last_arm_) return {rng.uniform() < 0.5 ? std::size_t{0} : std::size_t{1}};
        if (deterministic_) return pw_next(*last_arm_, last_outcome_);
        return mcad_next(*last_arm_, last_outcome_, params_, rng);
    }

    void observe(const TrialState&, Assignment arm, Outcome outcome) override {
        last_arm_ = arm;
        last_outcome_ = outcome;
    }

    std::vector<double> allocation_probabilities(const TrialState&) const override {
        if (!last_arm_) return {0.5, 0.5};
        double stay;
        if (last_arm_->arm == 0)
            stay = last_outcome_.success ? params_.alpha_s : params_.alpha_f;
        else
            stay = last_outcome_.success ? params_.beta_s : params_.beta_f;
        std::vector<double> p(2);
        p[last_arm_->arm] = stay;
        p[1 - last_arm_->arm] = 1.0 - stay;
        return p;
    }

private:
    MarkovParams params_;
    bool deterministic_;
    std::optional<Assignment> last_arm_;  // most recently observed subject
    Outcome last_outcome_{};
};

class UrnDesign final : public Design {
public:
    UrnDesign(DesignKind kind, UrnState urn) : kind_(kind), urn_(std::move(urn)) {}

    Assignment assign(const TrialState&, RandomStream& rng) override { return draw_arm(urn_, rng); }

    void observe(const TrialState& visible, Assignment arm, Outcome outcome) override {
        switch (kind_) {
            case DesignKind::RandomizedPlayTheWinner:
                urn_ = rpw_update(std::move(urn_), arm, outcome);
                break;
            case DesignKind::WeiUrn:
                urn_ = wei_update(std::move(urn_), arm, outcome);
                break;
            default:
                urn_ = seu_update(std::move(urn_), arm, outcome, estimate(visible, kUrnUpdateScheme));
                break;
        }
    }

    std::vector<double> allocation_probabilities(const TrialState&) const override {
        std::vector<double> p = urn_.balls;
        const double total = urn_.total();
        for (double& x : p) x /= total;
        return p;
    }

private:
    DesignKind kind_;
    UrnState urn_;
};

class DropTheLoserDesign final : public Design {
public:
    explicit DropTheLoserDesign(DLUrnState urn) : urn_(std::move(urn)) {}

    Assignment assign(const TrialState&, RandomStream& rng) override { return dl_draw(urn_, rng); }

    void observe(const TrialState&, Assignment arm, Outcome outcome) override {
        dl_settle(urn_, arm, outcome);
    }

    std::vector<double> allocation_probabilities(const TrialState&) const override {
        return dl_assignment_probabilities(urn_);
    }

private:
    DLUrnState urn_;
};

class DbcdDesign final : public Design {
public:
    DbcdDesign(TargetKind target, DbcdConfig cfg) : target_(target), cfg_(cfg) {}

    Assignment assign(const TrialState& visible, RandomStream& rng) override {
        return dbcd_next(visible, target_, cfg_, rng);
    }
    void observe(const TrialState&, Assignment, Outcome) override {}
    std::vector<double> allocation_probabilities(const TrialState& visible) const override {
        return dbcd_probabilities(visible, target_, cfg_);
    }

private:
    TargetKind target_;
    DbcdConfig cfg_;
};

class RbcdDesign final : public Design {
public:
    RbcdDesign(TargetKind target, RbcdConfig cfg) : target_(target), cfg_(cfg) {}

    Assignment assign(const TrialState& visible, RandomStream& rng) override {
        return rbcd_next(visible, target_, cfg_, rng);
    }
    void observe(const TrialState&, Assignment, Outcome) override {}
    std::vector<double> allocation_probabilities(const TrialState& visible) const override {
        const double p0 = rbcd_probability(visible, target_, cfg_);
        return {p0, 1.0 - p0};
    }

private:
    TargetKind target_;
    RbcdConfig cfg_;
};

bool two_arm_only(DesignKind k) {
    switch (k) {
        case DesignKind::CompleteRandomization:
        case DesignKind::PlayTheWinner:
        case DesignKind::Markov:
        case DesignKind::RandomizedPlayTheWinner:
        case DesignKind::Rbcd: return true;
        default: return false;
    }
}

}  // namespace

DesignKind parse_design(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const auto& d : kDesignNames)
        if (d.name == lower) return d.kind;
    throw std::invalid_argument("design.kind: unknown design '" + std::string(name) + "'");
}

std::string_view design_name(DesignKind kind) {
    for (const auto& d : kDesignNames)
        if (d.kind == kind) return d.name;
    return "?";
}

void DesignSpec::validate() const {
    if (arms < 2 || arms > kMaxArms)
        throw std::invalid_argument("arms.p: need between 2 and 8 arms");
    if (two_arm_only(kind) && arms != 2)
        throw std::invalid_argument("design.kind: " + std::string(design_name(kind)) +
                                    " is a two-arm design");
    if (kind == DesignKind::Markov) markov.validate();
    if (!urn_initial.empty()) {
        if (urn_initial.size() != arms)
            throw std::invalid_argument("urn.initial: need one count per arm");
        UrnState{urn_initial}.validate();
    }
    if (!dl_initial.empty()) {
        if (dl_initial.size() != arms + 1)
            throw std::invalid_argument("dl.initial: need the immigration count plus one count per arm");
        DLUrnState{dl_initial}.validate();
    }
    if (target == TargetKind::Rsihr && arms != 2 &&
        (kind == DesignKind::Dbcd || kind == DesignKind::Rbcd))
        throw std::invalid_argument("target.kind: rsihr is defined for two arms only");
    if (kind == DesignKind::Dbcd) dbcd.validate();
    if (kind == DesignKind::Rbcd) rbcd.validate();
}

std::optional<TargetKind> DesignSpec::implied_target() const {
    switch (kind) {
        case DesignKind::PlayTheWinner:
        case DesignKind::RandomizedPlayTheWinner:
        case DesignKind::WeiUrn:
        case DesignKind::DropTheLoser: return TargetKind::UrnProportion;
        case DesignKind::SeuUrn:
            if (arms == 2) return TargetKind::UrnProportion;
            return std::nullopt;
        case DesignKind::Dbcd:
        case DesignKind::Rbcd: return target;
        default: return std::nullopt;
    }
}

std::unique_ptr<Design> make_design(const DesignSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case DesignKind::CompleteRandomization:
            return std::make_unique<MarkovDesign>(MarkovParams::complete_randomization(), false);
        case DesignKind::PlayTheWinner:
            return std::make_unique<MarkovDesign>(MarkovParams::play_the_winner(), true);
        case DesignKind::Markov: return std::make_unique<MarkovDesign>(spec.markov, false);
        case DesignKind::RandomizedPlayTheWinner:
        case DesignKind::WeiUrn:
        case DesignKind::SeuUrn:
            return std::make_unique<UrnDesign>(
                spec.kind, spec.urn_initial.empty() ? UrnState::uniform(spec.arms)
                                                    : UrnState{spec.urn_initial});
        case DesignKind::DropTheLoser:
            return std::make_unique<DropTheLoserDesign>(
                spec.dl_initial.empty() ? DLUrnState::initial(spec.arms) : DLUrnState{spec.dl_initial});
        case DesignKind::Dbcd: return std::make_unique<DbcdDesign>(spec.target, spec.dbcd);
        case DesignKind::Rbcd: return std::make_unique<RbcdDesign>(spec.target, spec.rbcd);
    }
    throw std::invalid_argument("design.kind: unsupported design");
}

Trial::Trial(const DesignSpec& spec) : spec_(spec), design_(make_design(spec)), state_(spec.arms) {}

std::size_t Trial::enroll(RandomStream& rng) { return state_.enroll(design_->assign(state_, rng)); }

void Trial::resolve(std::size_t subject, Outcome outcome) {
    if (subject >= state_.n()) throw std::out_of_range("resolve: unknown subject");
    const SubjectRecord& rec = state_.history()[subject];
    if (rec.outcome) throw std::logic_error("resolve: outcome already recorded");
    design_->observe(state_, rec.assignment, outcome);
    state_.resolve(subject, outcome);
}

std::vector<double> Trial::allocation_probabilities() const {
    return design_->allocation_probabilities(state_);
}

TrialState simulate_trial(const DesignSpec& spec, const BernoulliArms& arms, std::size_t n,
                          RandomStream& rng) {
    if (arms.size() != spec.arms) throw std::invalid_argument("arms.p: arm count does not match the design");
    Trial trial(spec);
    trial.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t subject = trial.enroll(rng);
        const Outcome o = draw_bernoulli(arms, trial.state().history()[subject].assignment.arm, rng);
        trial.resolve(subject, o);
    }
    return trial.state();
}

}  // namespace alloclab
