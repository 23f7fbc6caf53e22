#include "alloclab/targets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "alloclab/core.hpp"

namespace alloclab {

namespace {

// Every built-in target has the form rho_k = w(p_k) / sum_j w(p_j).
double weight(TargetKind t, double p) {
    switch (t) {
        case TargetKind::UrnProportion: return 1.0 / (1.0 - p);
        case TargetKind::Neyman: return std::sqrt(p * (1.0 - p));
        case TargetKind::Rsihr: return std::sqrt(p);
    }
    return 0.0;
}

double weight_derivative(TargetKind t, double p) {
    switch (t) {
        case TargetKind::UrnProportion: return 1.0 / ((1.0 - p) * (1.0 - p));
        case TargetKind::Neyman: return (1.0 - 2.0 * p) / (2.0 * std::sqrt(p * (1.0 - p)));
        case TargetKind::Rsihr: return 0.5 / std::sqrt(p);
    }
    return 0.0;
}

void check_domain(TargetKind t, std::span<const double> p) {
    if (p.size() < 2 || p.size() > kMaxArms)
        throw std::invalid_argument("target: unsupported arm count");
    if (t == TargetKind::Rsihr && p.size() != 2)
        throw std::invalid_argument("target: rsihr is defined for two arms only (unsupported arity)");
    for (double pk : p)
        if (!(pk > 0.0 && pk < 1.0))
            throw std::invalid_argument("target: success probabilities must lie in (0,1)");
}

}  // namespace

TargetKind parse_target(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "urn") return TargetKind::UrnProportion;
    if (lower == "neyman") return TargetKind::Neyman;
    if (lower == "rsihr") return TargetKind::Rsihr;
    throw std::invalid_argument("target: unknown target '" + std::string(name) + "'");
}

std::string_view target_name(TargetKind kind) {
    switch (kind) {
        case TargetKind::UrnProportion: return "urn";
        case TargetKind::Neyman: return "neyman";
        case TargetKind::Rsihr: return "rsihr";
    }
    return "?";
}

std::vector<double> rho(TargetKind target, std::span<const double> p) {
    check_domain(target, p);
    std::vector<double> w(p.size());
    double total = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) total += (w[k] = weight(target, p[k]));
    for (double& x : w) x /= total;
    return w;
}

Matrix grad_rho(TargetKind target, std::span<const double> p) {
    const std::vector<double> r = rho(target, p);
    double total = 0.0;
    for (double pk : p) total += weight(target, pk);
    const std::size_t k = p.size();
    Matrix j(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        const double dw = weight_derivative(target, p[a]) / total;
        for (std::size_t b = 0; b < k; ++b) j(a, b) = dw * ((a == b ? 1.0 : 0.0) - r[b]);
    }
    return j;
}

double fisher_bernoulli(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("fisher: p must lie in (0,1)");
    return 1.0 / (p * (1.0 - p));
}

}  // namespace alloclab
