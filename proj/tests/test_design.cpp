#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "alloclab/design.hpp"
#include "alloclab/drop_loser.hpp"
#include "alloclab/urn.hpp"

using namespace alloclab;

namespace {

DesignSpec spec_of(DesignKind k, std::size_t arms = 2) {
    DesignSpec s;
    s.kind = k;
    s.arms = arms;
    return s;
}

}  // namespace

TEST_CASE("names round trip") {
    for (auto k : {DesignKind::CompleteRandomization, DesignKind::PlayTheWinner, DesignKind::Markov,
                   DesignKind::RandomizedPlayTheWinner, DesignKind::WeiUrn, DesignKind::SeuUrn,
                   DesignKind::DropTheLoser, DesignKind::Dbcd, DesignKind::Rbcd})
        CHECK(parse_design(design_name(k)) == k);
    CHECK(parse_design("DBCD") == DesignKind::Dbcd);
    CHECK_THROWS_AS(parse_design("efron"), std::invalid_argument);
}

TEST_CASE("spec validation") {
    CHECK_THROWS(spec_of(DesignKind::PlayTheWinner, 3).validate());
    CHECK_THROWS(spec_of(DesignKind::Rbcd, 3).validate());
    CHECK_NOTHROW(spec_of(DesignKind::WeiUrn, 4).validate());
    auto s = spec_of(DesignKind::Dbcd, 3);
    s.target = TargetKind::Rsihr;
    CHECK_THROWS(s.validate());
    auto u = spec_of(DesignKind::RandomizedPlayTheWinner);
    u.urn_initial = {1, 2, 3};
    CHECK_THROWS(u.validate());
    auto d = spec_of(DesignKind::DropTheLoser);
    d.dl_initial = {0, 1, 1};
    CHECK_THROWS(d.validate());
    CHECK(spec_of(DesignKind::RandomizedPlayTheWinner).implied_target() == TargetKind::UrnProportion);
    CHECK_FALSE(spec_of(DesignKind::CompleteRandomization).implied_target().has_value());
}

TEST_CASE("play-the-winner trajectory by hand") {
    // first subject: fair coin; afterwards stay on success, switch on failure
    const BernoulliArms arms({0.7, 0.5});
    RandomStream rng(8, 3), mirror(8, 3);
    const TrialState s = simulate_trial(spec_of(DesignKind::PlayTheWinner), arms, 200, rng);
    std::size_t arm = mirror.uniform() < 0.5 ? 0 : 1;
    for (std::size_t m = 0; m < 200; ++m) {
        REQUIRE(s.history()[m].assignment.arm == arm);
        const bool success = mirror.uniform() < arms.p(arm);
        REQUIRE(s.history()[m].outcome->success == success);
        if (!success) arm = 1 - arm;
    }
    CHECK(rng.draws() == mirror.draws());
}

TEST_CASE("rpw trajectory by hand") {
    const BernoulliArms arms({0.7, 0.5});
    RandomStream rng(1, 1), mirror(1, 1);
    const TrialState s = simulate_trial(spec_of(DesignKind::RandomizedPlayTheWinner), arms, 300, rng);
    double balls[2] = {1, 1};
    for (std::size_t m = 0; m < 300; ++m) {
        const std::size_t arm = mirror.uniform() < balls[0] / (balls[0] + balls[1]) ? 0 : 1;
        REQUIRE(s.history()[m].assignment.arm == arm);
        const bool success = mirror.uniform() < arms.p(arm);
        balls[success ? arm : 1 - arm] += 1;
    }
}

TEST_CASE("dl trajectory matches dl_next") {
    const BernoulliArms arms({0.6, 0.4, 0.8});
    RandomStream rng(2, 2), mirror(2, 2);
    const TrialState s = simulate_trial(spec_of(DesignKind::DropTheLoser, 3), arms, 300, rng);
    DLUrnState urn = DLUrnState::initial(3);
    for (std::size_t m = 0; m < 300; ++m) {
        auto [a, o, next] = dl_next(urn, arms, mirror);
        REQUIRE(s.history()[m].assignment == a);
        REQUIRE(*s.history()[m].outcome == o);
        urn = next;
    }
}

TEST_CASE("every design runs, is deterministic and keeps its invariants") {
    const std::vector<double> p2{0.7, 0.5}, p3{0.7, 0.5, 0.3};
    for (auto k : {DesignKind::CompleteRandomization, DesignKind::PlayTheWinner, DesignKind::Markov,
                   DesignKind::RandomizedPlayTheWinner, DesignKind::WeiUrn, DesignKind::SeuUrn,
                   DesignKind::DropTheLoser, DesignKind::Dbcd, DesignKind::Rbcd}) {
        for (std::size_t arms_k : {2u, 3u}) {
            auto spec = spec_of(k, arms_k);
            if (spec.kind == DesignKind::Markov) spec.markov = {0.8, 0.3, 0.7, 0.2};
            try {
                spec.validate();
            } catch (const std::invalid_argument&) {
                continue;
            }
            const BernoulliArms arms(arms_k == 2 ? p2 : p3);
            RandomStream a(3, 0), b(3, 0);
            const TrialState s = simulate_trial(spec, arms, 500, a);
            const TrialState t = simulate_trial(spec, arms, 500, b);
            std::size_t total = 0;
            for (std::size_t j = 0; j < arms_k; ++j) {
                CHECK(s.assigned()[j] == t.assigned()[j]);
                CHECK(s.successes()[j] <= s.observed()[j]);
                CHECK(s.observed()[j] == s.assigned()[j]);
                total += s.assigned()[j];
            }
            CHECK(total == 500);
        }
    }
}

TEST_CASE("trial object") {
    Trial t(spec_of(DesignKind::Dbcd));
    RandomStream rng(1, 0);
    CHECK(t.allocation_probabilities() == std::vector<double>{1.0, 0.0});
    const auto m = t.enroll(rng);
    CHECK(t.allocation_probabilities() == std::vector<double>{0.0, 1.0});
    t.resolve(m, {true});
    CHECK_THROWS_AS(t.resolve(m, {true}), std::logic_error);
    CHECK_THROWS_AS(t.resolve(5, {true}), std::out_of_range);

    Trial pw(spec_of(DesignKind::PlayTheWinner));
    CHECK(pw.allocation_probabilities() == std::vector<double>{0.5, 0.5});
    const auto s0 = pw.enroll(rng);
    const auto arm = pw.state().history()[s0].assignment.arm;
    // nothing observed yet: still a fair coin
    CHECK(pw.allocation_probabilities() == std::vector<double>{0.5, 0.5});
    pw.resolve(s0, {false});
    CHECK(pw.allocation_probabilities()[1 - arm] == 1.0);

    Trial urn(spec_of(DesignKind::RandomizedPlayTheWinner));
    const auto u0 = urn.enroll(rng);
    urn.resolve(u0, {true});
    const auto a0 = urn.state().history()[u0].assignment.arm;
    CHECK(urn.allocation_probabilities()[a0] == doctest::Approx(2.0 / 3));
}

TEST_CASE("seu urn updates with the (S+1)/(N+1) estimate before the outcome is recorded") {
    Trial t(spec_of(DesignKind::SeuUrn, 3));
    RandomStream rng(4, 0);
    // drive to a known state: subject on arm a fails
    const auto m = t.enroll(rng);
    const auto a = t.state().history()[m].assignment.arm;
    t.resolve(m, {false});
    // estimate seen by the update: all arms unobserved, p_hat = 1 each, so the
    // failure spreads evenly: 1/2 ball to each other arm
    const auto probs = t.allocation_probabilities();
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(probs[j] == doctest::Approx(j == a ? 1.0 / 4 : 1.5 / 4));
}
