// targets.hpp: target allocation proportions rho(p) for Bernoulli arms, their
// gradients, and per-observation Fisher information.
#pragma once
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alloclab/matrix.hpp"

namespace alloclab {

enum class TargetKind {
    UrnProportion,  // (1/q_k) / sum_j (1/q_j)
    Neyman,         // sqrt(p_k q_k) / sum_j sqrt(p_j q_j)
    Rsihr,          // sqrt(p_1) / (sqrt(p_1) + sqrt(p_2)); two arms only
};

// Accepts "urn", "neyman", "rsihr" in any case.
TargetKind parse_target(std::string_view name);
std::string_view target_name(TargetKind kind);

// Throws std::invalid_argument for RSIHR with K != 2 or p outside (0,1).
std::vector<double> rho(TargetKind target, std::span<const double> p);

// J(k, j) = d rho_j / d p_k. Every row sums to zero.
Matrix grad_rho(TargetKind target, std::span<const double> p);

// 1 / (p q), the information in one Bernoulli observation.
double fisher_bernoulli(double p);

}  // namespace alloclab
