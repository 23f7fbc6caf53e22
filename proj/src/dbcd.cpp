#include "alloclab/dbcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "alloclab/asymptotics.hpp"

namespace alloclab {

void DbcdConfig::validate() const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("dbcd.gamma: must be >= 0");
    if (burn_in < 1) throw std::invalid_argument("dbcd.m: must be >= 1");
    scheme.validate();
}

void RbcdConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("rbcd.alpha: must lie in (0,1)");
    scheme.validate();
}

std::vector<double> g_alloc(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("g_alloc: size mismatch");
    if (!(gamma >= 0.0)) throw std::domain_error("g_alloc: gamma must be >= 0");
    const std::size_t k = x.size();
    std::vector<double> logw(k);
    for (std::size_t j = 0; j < k; ++j) {
        if (!(y[j] > 0.0)) throw std::domain_error("g_alloc: target component must be positive");
        if (gamma > 0.0 && !(x[j] > 0.0))
            throw std::domain_error("g_alloc: allocation proportion must be positive");
        logw[j] = std::log(y[j]) + (gamma > 0.0 ? gamma * (std::log(y[j]) - std::log(x[j])) : 0.0);
    }
    if (gamma == 0.0) {
        // the estimated target itself, without a log/exp round trip
        const double total = std::accumulate(y.begin(), y.end(), 0.0);
        for (std::size_t j = 0; j < k; ++j) logw[j] = y[j] / total;
        return logw;
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (double& w : logw) total += (w = std::exp(w - top));
    for (double& w : logw) w /= total;
    return logw;
}

std::vector<double> estimated_target(const TrialState& state, TargetKind target,
                                     EstimatorScheme scheme) {
    // sample-mean schemes can put p_hat on the boundary of (0,1)
    std::vector<double> p = estimate(state, scheme).p_hat;
    for (double& x : p) x = std::clamp(x, kTargetClamp, 1.0 - kTargetClamp);
    std::vector<double> r = rho(target, p);
    double total = 0.0;
    for (double& x : r) total += (x = std::clamp(x, kTargetClamp, 1.0 - kTargetClamp));
    for (double& x : r) x /= total;
    return r;
}

std::vector<double> dbcd_probabilities(const TrialState& state, TargetKind target,
                                       const DbcdConfig& cfg) {
    const std::size_t k = state.arms();
    const std::size_t n = state.n();
    if (n < cfg.burn_in * k) {
        std::vector<double> one_hot(k, 0.0);
        one_hot[n % k] = 1.0;
        return one_hot;
    }
    std::vector<double> x(k);
    for (std::size_t j = 0; j < k; ++j)
        x[j] = static_cast<double>(state.assigned()[j]) / static_cast<double>(n);
    return g_alloc(x, estimated_target(state, target, cfg.scheme), cfg.gamma);
}

Assignment dbcd_next(const TrialState& state, TargetKind target, const DbcdConfig& cfg,
                     RandomStream& rng) {
    const std::size_t k = state.arms();
    if (state.n() < cfg.burn_in * k) return {state.n() % k};
    return {sample_index(dbcd_probabilities(state, target, cfg), rng.uniform())};
}

double rbcd_rule(double x, double rho_hat, double alpha, std::size_t n) {
    const double scale = std::max(1.0, static_cast<double>(n));
    const double gap = (x - rho_hat) * static_cast<double>(n);
    if (std::abs(gap) <= kRbcdTieTolerance * scale) return rho_hat;
    return gap > 0.0 ? alpha * rho_hat : 1.0 - alpha * (1.0 - rho_hat);
}

double rbcd_probability(const TrialState& state, TargetKind target, const RbcdConfig& cfg) {
    if (state.arms() != 2) throw std::invalid_argument("rbcd: two-arm design");
    const std::size_t n = state.n();
    if (n < 2) return n == 0 ? 1.0 : 0.0;
    const double r = estimated_target(state, target, cfg.scheme)[0];
    const double x = static_cast<double>(state.assigned()[0]) / static_cast<double>(n);
    return rbcd_rule(x, r, cfg.alpha, n);
}

Assignment rbcd_next(const TrialState& state, TargetKind target, const RbcdConfig& cfg,
                     RandomStream& rng) {
    if (state.n() < 2) {
        if (state.arms() != 2) throw std::invalid_argument("rbcd: two-arm design");
        return {state.n()};
    }
    return {rng.uniform() < rbcd_probability(state, target, cfg) ? std::size_t{0} : std::size_t{1}};
}

Matrix dbcd_variance(TargetKind target, std::span<const double> p, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("dbcd.gamma: must be >= 0");
    const Matrix sigma_rho = lower_bound(target, p);
    if (std::isinf(gamma)) return sigma_rho;
    const std::vector<double> v = rho(target, p);
    const Matrix allocation = Matrix::diagonal(v) - Matrix::outer(v);
    return sigma_rho + (1.0 / (1.0 + 2.0 * gamma)) * (allocation + sigma_rho);
}

}  // namespace alloclab
