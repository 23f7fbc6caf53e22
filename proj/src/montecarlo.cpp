#include "alloclab/montecarlo.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "alloclab/urn.hpp"

namespace alloclab {

void SimConfig::validate() const {
    design.validate();
    if (p.size() != design.arms) throw std::invalid_argument("arms.p: arm count does not match the design");
    BernoulliArms{p};
    if (n < 10) throw std::invalid_argument("sim.n: must be at least 10");
    if (replicates < 1) throw std::invalid_argument("sim.replicates: must be at least 1");
    if (!(test_level > 0.0 && test_level < 1.0))
        throw std::invalid_argument("sim.test_level: must lie in (0,1)");
    if (threads < 1) throw std::invalid_argument("sim.threads: must be at least 1");
    if (design.kind == DesignKind::Dbcd && std::isinf(design.dbcd.gamma))
        throw std::invalid_argument("dbcd.gamma: simulation needs a finite gamma");
    if (delay) delay->validate(design.arms);
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        carry_ += (sum_ - t) + x;
    else
        carry_ += (x - t) + sum_;
    sum_ = t;
}

ReplicateResult run_replicate(const SimConfig& cfg, std::size_t r) {
    const BernoulliArms arms(cfg.p);
    RandomStream rng(cfg.seed, r);
    ReplicateResult out;
    if (cfg.delay) {
        DelayedTrial run = run_delayed_trial(cfg.design, arms, *cfg.delay, cfg.n, rng);
        out.assigned = run.state.assigned();
        out.terminal_pending = run.stats.terminal_pending;
        out.success_gap = run.stats.success_gap(run.state);
        out.successes = std::move(run.stats.total_successes);
    } else {
        const TrialState state = simulate_trial(cfg.design, arms, cfg.n, rng);
        out.assigned = state.assigned();
        out.successes = state.successes();
    }
    return out;
}

std::vector<ReplicateResult> run_replicates(const SimConfig& cfg, std::size_t first, std::size_t count) {
    cfg.validate();
    std::vector<ReplicateResult> out(count);
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = run_replicate(cfg, first + i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) out[i] = run_replicate(cfg, first + i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

namespace {

template <class F>
Estimate mean_and_se(std::span<const ReplicateResult> results, F f) {
    const double r = static_cast<double>(results.size());
    CompensatedSum s;
    for (const auto& x : results) s.add(f(x));
    const double mean = s.value() / r;
    if (results.size() < 2) return {mean, 0.0};
    CompensatedSum ss;
    for (const auto& x : results) {
        const double d = f(x) - mean;
        ss.add(d * d);
    }
    return {mean, std::sqrt(ss.value() / (r - 1.0) / r)};
}

std::size_t total(const std::vector<std::size_t>& v) {
    std::size_t s = 0;
    for (std::size_t x : v) s += x;
    return s;
}

}  // namespace

bool wald_rejects(const ReplicateResult& r, double level) {
    if (r.assigned.size() != 2) throw std::invalid_argument("wald: two-arm test");
    double diff = 0.0, var = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
        const double nk = static_cast<double>(r.assigned[k]);
        const double sk = static_cast<double>(r.successes[k]);
        const double raw = sk / std::max(nk, 1.0);
        const double smooth = (sk + 0.5) / (nk + 1.0);
        diff += k == 0 ? raw : -raw;
        var += smooth * (1.0 - smooth) / std::max(nk, 1.0);
    }
    const double z = std::abs(diff) / std::sqrt(var);
    const double crit = boost::math::quantile(boost::math::normal(), 1.0 - level / 2.0);
    return z > crit;
}

Estimate wald_power(std::span<const ReplicateResult> results, double level) {
    if (results.empty()) throw std::invalid_argument("wald: no replicates");
    std::size_t rejected = 0;
    for (const auto& r : results) rejected += wald_rejects(r, level);
    const double rate = static_cast<double>(rejected) / static_cast<double>(results.size());
    return {rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(results.size()))};
}

Estimate expected_failures(std::span<const ReplicateResult> results) {
    return mean_and_se(results, [](const ReplicateResult& r) {
        return static_cast<double>(total(r.assigned) - total(r.successes));
    });
}

std::optional<AsymptoticSummary> analytic_reference(const DesignSpec& spec, std::span<const double> p) {
    const std::size_t k = p.size();
    switch (spec.kind) {
        case DesignKind::PlayTheWinner: return var_pw(p);
        case DesignKind::CompleteRandomization:
            return var_mcad(MarkovParams::complete_randomization(), p);
        case DesignKind::Markov: return var_mcad(spec.markov, p);
        case DesignKind::RandomizedPlayTheWinner: return var_rpw(p);
        case DesignKind::WeiUrn:
        case DesignKind::SeuUrn: {
            if (k == 2) return var_rpw(p);
            const DesignMatrix h = spec.kind == DesignKind::WeiUrn ? wei_design_matrix(p)
                                                                   : seu_design_matrix(p, p);
            const SpectralInfo info = spectral(h);
            AsymptoticSummary out;
            out.v = info.v;
            out.regime = Regime::DegenerateOrUnknown;
            out.note = "no closed-form variance for K > 2";
            return out;
        }
        case DesignKind::DropTheLoser: return var_dl(p);
        case DesignKind::Dbcd: {
            AsymptoticSummary out;
            out.v = rho(spec.target, p);
            out.sigma2 = dbcd_variance(spec.target, p, spec.dbcd.gamma);
            return out;
        }
        case DesignKind::Rbcd: {
            AsymptoticSummary out;
            out.v = rho(spec.target, p);
            out.sigma2 = lower_bound(spec.target, p);
            return out;
        }
    }
    return std::nullopt;
}

std::optional<Matrix> design_lower_bound(const DesignSpec& spec, std::span<const double> p) {
    const auto target = spec.implied_target();
    if (!target) return std::nullopt;
    if (*target == TargetKind::Rsihr && p.size() != 2) return std::nullopt;
    return lower_bound(*target, p);
}

StudyReport summarize(const SimConfig& cfg, std::span<const ReplicateResult> results) {
    if (results.empty()) throw std::invalid_argument("summarize: no replicates");
    const std::size_t k = cfg.design.arms;
    const double n = static_cast<double>(cfg.n);
    const double r = static_cast<double>(results.size());
    const double root_n = std::sqrt(n);

    StudyReport rep;
    rep.config = cfg;

    // two passes: means, then centred cross products
    std::vector<double> mean(k);
    for (std::size_t a = 0; a < k; ++a) {
        CompensatedSum s;
        for (const auto& x : results) s.add(static_cast<double>(x.assigned[a]) / n);
        mean[a] = s.value() / r;
    }
    rep.scaled_variance = Matrix(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            CompensatedSum s;
            for (const auto& x : results) {
                const double da = root_n * (static_cast<double>(x.assigned[a]) / n - mean[a]);
                const double db = root_n * (static_cast<double>(x.assigned[b]) / n - mean[b]);
                s.add(da * db);
            }
            const double c = results.size() > 1 ? s.value() / (r - 1.0) : 0.0;
            rep.scaled_variance(a, b) = c;
            rep.scaled_variance(b, a) = c;
        }
    }
    for (std::size_t a = 0; a < k; ++a)
        rep.mean_proportions.push_back({mean[a], std::sqrt(rep.scaled_variance(a, a) / n / r)});
    rep.sigma2_hat = rep.scaled_variance(0, 0);
    rep.sigma2_se = results.size() > 1 ? rep.sigma2_hat * std::sqrt(2.0 / (r - 1.0)) : 0.0;

    rep.analytic = analytic_reference(cfg.design, cfg.p);
    rep.lower_bound = design_lower_bound(cfg.design, cfg.p);
    if (rep.analytic && rep.analytic->has_variance() && rep.analytic->scalar() > 0.0)
        rep.ratio = rep.sigma2_hat / rep.analytic->scalar();

    if (k == 2) rep.power = wald_power(results, cfg.test_level);
    rep.failures = expected_failures(results);

    if (cfg.delay) {
        DelaySummary d;
        d.terminal_pending = mean_and_se(results, [](const ReplicateResult& x) {
            return static_cast<double>(x.terminal_pending);
        });
        d.scaled_gap = mean_and_se(results, [root_n](const ReplicateResult& x) {
            return static_cast<double>(x.success_gap) / root_n;
        });
        rep.delay = d;
    }
    return rep;
}

StudyReport run_study(const SimConfig& cfg) {
    const auto results = run_replicates(cfg, 0, cfg.replicates);
    return summarize(cfg, results);
}

}  // namespace alloclab
