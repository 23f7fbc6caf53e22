// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "alloclab/asymptotics.hpp"
#include "alloclab/montecarlo.hpp"

using namespace alloclab;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail, double seconds) {
    std::printf("%s %-22s %s (%.1fs)\n", ok ? "PASS" : "FAIL", name, detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

void criterion(const char* name, const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("threw: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(name, ok, detail, s);
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, static_cast<double>(args)...);
    return buf;
}

SimConfig scenario(DesignKind kind, std::vector<double> p, std::size_t n, std::size_t R, std::uint64_t seed) {
    SimConfig cfg;
    cfg.design.kind = kind;
    cfg.design.arms = p.size();
    cfg.p = std::move(p);
    cfg.n = n;
    cfg.replicates = R;
    cfg.seed = seed;
    return cfg;
}

// |x - target| <= 3 se
bool within(double x, double target, double se) { return std::abs(x - target) <= 3.0 * se; }

// Band for a sample variance of R replicates around sigma2.
double var_band(double sigma2, std::size_t R) { return sigma2 * std::sqrt(2.0 / (R - 1.0)); }

// n Var(N_1/n) for two-arm RPW started from one ball of each type, by exact
// moment recursion: the urn total after m draws is 2 + m, so the first and
// second moments of (Y_1, N_1) close linearly.
double rpw_exact_scaled_variance(double p1, double p2, std::size_t n) {
    const double q2 = 1.0 - p2;
    double ey = 1.0, en = 0.0, eyy = 1.0, enn = 0.0, eny = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double t = 2.0 + static_cast<double>(m);
        const double x = ey / t;
        const double dy = x * p1 + (1.0 - x) * q2;
        const double dyy = 2.0 * (q2 * ey + (p1 - q2) * eyy / t) + dy;
        const double dnn = 2.0 * eny / t + x;
        const double dny = q2 * en + (p1 - q2) * eny / t + eyy / t + p1 * ey / t;
        ey += dy;
        en += x;
        eyy += dyy;
        enn += dnn;
        eny += dny;
    }
    return (enn - en * en) / static_cast<double>(n);
}

}  // namespace

int main() {
    const std::vector<double> p{0.7, 0.5};
    const double pw_sigma2 = 0.3515625;

    criterion("formula-identities", [](std::string& detail) {
        std::mt19937_64 gen(20240601);
        std::uniform_real_distribution<double> unit(0.02, 0.98);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const std::vector<double> q{unit(gen), unit(gen)};
            for (TargetKind t : {TargetKind::UrnProportion, TargetKind::Rsihr, TargetKind::Neyman})
                worst = std::max(worst, std::abs(closed_form_lower_bound(t, q[0], q[1]) - lower_bound(t, q)(0, 0)));
            const double pw = var_pw(q).scalar();
            worst = std::max(worst, var_dl(q).sigma2.max_abs_diff(var_pw(q).sigma2));
            worst = std::max(worst, std::abs(pw - lower_bound(TargetKind::UrnProportion, q)(0, 0)));
            worst = std::max(worst, std::abs(var_mcad(MarkovParams{1, 0, 1, 0}, q).scalar() - pw));
            for (const auto& w : worked_examples(q, 2.0)) worst = std::max(worst, w.abs_diff);
            for (const auto& w : worked_examples(q, 0.5)) worst = std::max(worst, w.abs_diff);
        }
        detail = fmt("max |diff| = %.2e over 1000 draws", worst);
        return worst <= 1e-10;
    });

    double pw_hat = 0.0;
    criterion("pw", [&](std::string& detail) {
        const auto rep = run_study(scenario(DesignKind::PlayTheWinner, p, 2000, 20000, 101));
        pw_hat = rep.sigma2_hat;
        const auto& m = rep.mean_proportions[0];
        detail = fmt("N1/n %.5f (se %.5f) vs 0.625; sigma2 %.4f vs %.4f", m.value, m.se, rep.sigma2_hat, pw_sigma2);
        return within(m.value, 0.625, m.se) && within(rep.sigma2_hat, pw_sigma2, var_band(pw_sigma2, 20000));
    });

    criterion("rpw", [&](std::string& detail) {
        // The n = 2000 value sits well below the limit (the deficit decays like
        // n^-(1-2 lambda), lambda = p1 + p2 - 1), so the simulation is held to the
        // exact finite-n moment and the exact moments are held to the limit.
        const double limit = var_rpw(p).scalar();
        const double at_n = rpw_exact_scaled_variance(0.7, 0.5, 2000);
        const double far = rpw_exact_scaled_variance(0.7, 0.5, 16000000);
        const auto rep = run_study(scenario(DesignKind::RandomizedPlayTheWinner, p, 2000, 20000, 102));
        std::vector<double> trend;
        for (std::size_t n : {500, 2000, 8000})
            trend.push_back(run_study(scenario(DesignKind::RandomizedPlayTheWinner, {0.9, 0.9}, n, 2000, 103)).sigma2_hat);
        detail = fmt("sigma2 %.4f vs exact(n) %.4f, limit %.4f (exact at 1.6e7: %.4f); ", rep.sigma2_hat, at_n, limit, far) +
                 fmt("pw %.4f; (0.9,0.9): %.3f < %.3f < %.3f", pw_hat, trend[0], trend[1], trend[2]);
        return within(rep.sigma2_hat, at_n, var_band(at_n, 20000)) && std::abs(far - limit) < 1e-3 &&
               rep.sigma2_hat > pw_hat && trend[0] < trend[1] && trend[1] < trend[2];
    });

    criterion("dl", [&](std::string& detail) {
        // The mean carries an O(1/n) bias from the finite urn (about -2/n here),
        // so convergence is checked on the Richardson extrapolate 2 m(2n) - m(n).
        const auto rep = run_study(scenario(DesignKind::DropTheLoser, p, 2000, 20000, 104));
        const auto twice = run_study(scenario(DesignKind::DropTheLoser, p, 4000, 20000, 114));
        const auto& m = rep.mean_proportions[0];
        const auto& m2 = twice.mean_proportions[0];
        const double extrapolated = 2.0 * m2.value - m.value;
        const double ex_se = std::hypot(2.0 * m2.se, m.se);
        // two independent sample variances: PW's estimate and DL's
        const double se = std::hypot(var_band(pw_sigma2, 20000), var_band(pw_sigma2, 20000));
        detail = fmt("N1/n %.5f at 2000, %.5f at 4000, extrapolated %.5f (se %.5f); ", m.value, m2.value, extrapolated,
                     ex_se) +
                 fmt("sigma2 %.4f vs pw %.4f / analytic %.4f", rep.sigma2_hat, pw_hat, pw_sigma2);
        return within(extrapolated, 0.625, ex_se) && within(rep.sigma2_hat, pw_sigma2, var_band(pw_sigma2, 20000)) &&
               within(rep.sigma2_hat, pw_hat, se);
    });

    criterion("dbcd", [&](std::string& detail) {
        // gamma = 0 approaches its limit slowly (about 0.90 at n = 2000), so it is
        // held to the same band at n = 32000 and must move toward the limit.
        auto run = [&](double gamma, std::size_t n, std::uint64_t seed) {
            auto cfg = scenario(DesignKind::Dbcd, p, n, 20000, seed);
            cfg.design.target = TargetKind::UrnProportion;
            cfg.design.dbcd.gamma = gamma;
            return run_study(cfg);
        };
        const double t0 = dbcd_variance(TargetKind::UrnProportion, p, 0.0)(0, 0);
        const double t2 = dbcd_variance(TargetKind::UrnProportion, p, 2.0)(0, 0);
        const auto g0 = run(0.0, 2000, 105);
        const auto g2 = run(2.0, 2000, 106);
        const auto g0_large = run(0.0, 32000, 115);
        detail = fmt("gamma=2: %.4f vs %.4f; gamma=0: %.4f at 2000, %.4f at 32000 vs %.4f", g2.sigma2_hat, t2,
                     g0.sigma2_hat, g0_large.sigma2_hat, t0);
        const bool ok = within(g2.sigma2_hat, t2, var_band(t2, 20000)) &&
                        within(g0_large.sigma2_hat, t0, var_band(t0, 20000)) &&
                        std::abs(g0_large.sigma2_hat - t0) < std::abs(g0.sigma2_hat - t0) &&
                        g2.sigma2_hat < g0.sigma2_hat;
        detail += g2.sigma2_hat < g0.sigma2_hat ? "; decreasing in gamma" : "; NOT decreasing in gamma";
        detail += fmt("; N1/n at gamma=2 %.5f", g2.mean_proportions[0].value);
        return ok;
    });

    criterion("rbcd", [&](std::string& detail) {
        auto cfg = scenario(DesignKind::Rbcd, p, 2000, 20000, 107);
        cfg.design.target = TargetKind::Rsihr;
        cfg.design.rbcd.alpha = 2.0 / 3.0;
        const auto rep = run_study(cfg);
        const double v = std::sqrt(0.7) / (std::sqrt(0.7) + std::sqrt(0.5));
        const double lb = lower_bound(TargetKind::Rsihr, p)(0, 0);
        const auto& m = rep.mean_proportions[0];
        detail = fmt("N1/n %.5f vs %.5f; sigma2 %.5f vs bound %.5f", m.value, v, rep.sigma2_hat, lb);
        return within(m.value, v, m.se) && within(rep.sigma2_hat, lb, var_band(lb, 20000));
    });

    criterion("delay", [&](std::string& detail) {
        bool ok = true;
        for (DesignKind kind : {DesignKind::DropTheLoser, DesignKind::Dbcd}) {
            auto plain = scenario(kind, p, 2000, 5000, 108);
            plain.design.target = TargetKind::UrnProportion;
            auto delayed = plain;
            delayed.seed = 109;
            delayed.delay = DelayModel{1.0, {1.0}};
            const auto a = run_study(plain);
            const auto b = run_study(delayed);
            const double diff = b.mean_proportions[0].value - a.mean_proportions[0].value;
            const double se = std::hypot(a.mean_proportions[0].se, b.mean_proportions[0].se);
            // outstanding at the next entry: Poisson-thinned, mean lambda_0 / lambda_k = 1
            const auto& pend = b.delay->terminal_pending;
            std::vector<double> gap;
            for (std::size_t n : {500, 2000, 8000}) {
                auto t = delayed;
                t.n = n;
                t.replicates = 2000;
                t.seed = 110;
                gap.push_back(run_study(t).delay->scaled_gap.value);
            }
            const bool here = within(diff, 0.0, se) && within(pend.value, 1.0, pend.se) && gap[0] >= gap[1] &&
                              gap[1] >= gap[2];
            ok = ok && here;
            detail += std::string(design_name(kind)) + fmt(": dv %+.5f (se %.5f), pending %.3f, ", diff, se, pend.value) +
                      fmt("gap %.4f %.4f %.4f; ", gap[0], gap[1], gap[2]);
        }
        return ok;
    });

    criterion("power-ethics", [&](std::string& detail) {
        auto cfg = scenario(DesignKind::Dbcd, p, 400, 10000, 111);
        cfg.design.target = TargetKind::Rsihr;
        cfg.design.dbcd.gamma = 2.0;
        const auto rep = run_study(cfg);
        auto cr = scenario(DesignKind::CompleteRandomization, p, 400, 10000, 112);
        const auto cr_rep = run_study(cr);
        auto null_cfg = scenario(DesignKind::Dbcd, {0.6, 0.6}, 400, 10000, 113);
        null_cfg.design.target = TargetKind::Rsihr;
        const auto null_rep = run_study(null_cfg);
        const auto& size = *null_rep.power;
        detail = fmt("failures %.2f vs n*0.4 = 160 (cr %.2f); null rejection %.4f (se %.4f)", rep.failures.value,
                     cr_rep.failures.value, size.value, size.se);
        return rep.failures.value < 160.0 && within(size.value, 0.05, size.se);
    });

    std::printf("%s\n", failures == 0 ? "ALL PASS" : "SOME FAILED");
    return failures == 0 ? 0 : 1;
}
