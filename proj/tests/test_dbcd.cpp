#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "alloclab/dbcd.hpp"

using namespace alloclab;

namespace {

std::vector<double> g_direct(const std::vector<double>& x, const std::vector<double>& y, double gamma) {
    std::vector<double> w(x.size());
    double s = 0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (w[k] = y[k] * std::pow(y[k] / x[k], gamma));
    for (auto& v : w) v /= s;
    return w;
}

}  // namespace

TEST_CASE("allocation function") {
    const std::vector<double> x{0.55, 0.30, 0.15}, y{0.5, 0.3, 0.2};
    for (double gamma : {0.0, 0.5, 2.0, 7.0}) {
        const auto g = g_alloc(x, y, gamma);
        const auto d = g_direct(x, y, gamma);
        for (std::size_t k = 0; k < 3; ++k) CHECK(g[k] == doctest::Approx(d[k]).epsilon(1e-12));
    }
    // gamma = 0 is the estimated target itself; x = y is a fixed point
    CHECK(g_alloc(x, y, 0.0) == std::vector<double>(y.begin(), y.end()));
    for (std::size_t k = 0; k < 3; ++k) CHECK(g_alloc(y, y, 3.0)[k] == doctest::Approx(y[k]));
    // extreme imbalance stays finite
    const auto e = g_alloc(std::vector<double>{1e-300, 1.0}, std::vector<double>{0.5, 0.5}, 50.0);
    CHECK(e[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(g_alloc(std::vector<double>{0.0, 1.0}, std::vector<double>{0.5, 0.5}, 2.0), std::domain_error);
    CHECK_THROWS_AS(g_alloc(std::vector<double>{0.5, 0.5}, std::vector<double>{0.0, 1.0}, 2.0), std::domain_error);
}

TEST_CASE("burn-in is round robin, then g(N/n, rho_hat)") {
    const DbcdConfig cfg{2.0, 2, kDefaultScheme};
    TrialState s(3);
    RandomStream rng(1, 0);
    for (std::size_t m = 0; m < 6; ++m) {
        const auto probs = dbcd_probabilities(s, TargetKind::UrnProportion, cfg);
        CHECK(probs[m % 3] == 1.0);
        const auto before = rng.draws();
        const auto a = dbcd_next(s, TargetKind::UrnProportion, cfg, rng);
        CHECK(a.arm == m % 3);
        CHECK(rng.draws() == before);
        s.enroll(a);
    }
    s.resolve(0, {true});
    s.resolve(1, {false});
    s.resolve(3, {true});
    s.resolve(5, {true});
    // estimator (S+1)/(N_obs+2): arm0 (2+1)/(2+2), arm1 (0+1)/(1+2), arm2 (1+1)/(1+2)
    const std::vector<double> p_hat{0.75, 1.0 / 3, 2.0 / 3};
    std::vector<double> w(3);
    double ws = 0;
    for (int k = 0; k < 3; ++k) ws += (w[k] = 1 / (1 - p_hat[k]));
    for (auto& v : w) v /= ws;
    const auto expected = g_direct({2.0 / 6, 2.0 / 6, 2.0 / 6}, w, 2.0);
    const auto got = dbcd_probabilities(s, TargetKind::UrnProportion, cfg);
    for (int k = 0; k < 3; ++k) CHECK(got[k] == doctest::Approx(expected[k]).epsilon(1e-12));
}

TEST_CASE("estimated target survives degenerate estimates") {
    TrialState s(2);
    for (int i = 0; i < 5; ++i) s.record({0}, {true});
    s.record({1}, {false});
    // sample means (1, 0) sit on the boundary
    for (auto t : {TargetKind::UrnProportion, TargetKind::Neyman, TargetKind::Rsihr}) {
        const auto r = estimated_target(s, t, EstimatorScheme{0, 0});
        CHECK(r[0] + r[1] == doctest::Approx(1.0));
        for (double x : r) {
            CHECK(x >= kTargetClamp * 0.5);
            CHECK(x <= 1 - kTargetClamp * 0.5);
        }
    }
}

TEST_CASE("rbcd rule branches") {
    const double a = 2.0 / 3;
    CHECK(rbcd_rule(0.7, 0.6, a, 100) == doctest::Approx(a * 0.6));
    CHECK(rbcd_rule(0.5, 0.6, a, 100) == doctest::Approx(1 - a * 0.4));
    CHECK(rbcd_rule(0.6, 0.6, a, 100) == doctest::Approx(0.6));

    TrialState s(2);
    RandomStream rng(2, 0);
    const RbcdConfig cfg;
    CHECK(rbcd_next(s, TargetKind::Rsihr, cfg, rng).arm == 0);
    s.enroll({0});
    CHECK(rbcd_next(s, TargetKind::Rsihr, cfg, rng).arm == 1);
    s.enroll({1});
    CHECK(rng.draws() == 0);
    // N = (1,1), nothing observed: rho_hat = 1/2 = x, so the tie branch
    CHECK(rbcd_probability(s, TargetKind::Rsihr, cfg) == doctest::Approx(0.5));
    CHECK_THROWS(rbcd_probability(TrialState(3), TargetKind::UrnProportion, cfg));
}

TEST_CASE("dbcd variance by hand substitution at (0.7, 0.5), urn target") {
    // Sigma_rho = q1 q2 (p1+p2)/s^3 = 0.18/0.512; v(1-v) = 0.15/0.64
    const double lb = 0.18 / 0.512, vv = 0.15 / 0.64;
    const std::vector<double> p{0.7, 0.5};
    CHECK(dbcd_variance(TargetKind::UrnProportion, p, 2.0)(0, 0) == doctest::Approx(lb + (vv + lb) / 5).epsilon(1e-12));
    CHECK(dbcd_variance(TargetKind::UrnProportion, p, 2.0)(0, 0) == doctest::Approx(0.46875).epsilon(1e-12));
    CHECK(dbcd_variance(TargetKind::UrnProportion, p, 0.0)(0, 0) == doctest::Approx(0.9375).epsilon(1e-12));
    CHECK(dbcd_variance(TargetKind::UrnProportion, p, INFINITY)(0, 0) == doctest::Approx(lb));
    CHECK_THROWS(dbcd_variance(TargetKind::UrnProportion, p, -1.0));
}
