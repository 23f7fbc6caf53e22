// montecarlo.hpp: replicated trials and their comparison with analytic values.
#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "alloclab/asymptotics.hpp"
#include "alloclab/delay.hpp"
#include "alloclab/design.hpp"
#include "alloclab/matrix.hpp"

namespace alloclab {

struct SimConfig {
    DesignSpec design;
    std::vector<double> p{0.7, 0.5};
    std::size_t n = 2000;
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    std::optional<DelayModel> delay;
    double test_level = 0.05;
    unsigned threads = 1;

    void validate() const;
};

// What one replicate leaves behind. Outcomes count whether or not they were
// observed by the end of the trial.
struct ReplicateResult {
    std::vector<std::size_t> assigned;
    std::vector<std::size_t> successes;
    std::size_t terminal_pending = 0;  // delayed runs only
    std::size_t success_gap = 0;       // sum_k |S_k - S^obs_k|, delayed runs only
};

// Replicate r uses stream (seed, r). The result depends only on (cfg, r).
ReplicateResult run_replicate(const SimConfig& cfg, std::size_t r);
std::vector<ReplicateResult> run_replicates(const SimConfig& cfg, std::size_t first, std::size_t count);

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

struct DelaySummary {
    Estimate terminal_pending;
    Estimate scaled_gap;  // sum_k |S_k - S^obs_k| / sqrt(n)
};

struct StudyReport {
    SimConfig config;
    std::vector<Estimate> mean_proportions;
    Matrix scaled_variance;  // sample covariance of sqrt(n) N_n/n
    double sigma2_hat = 0.0; // scaled_variance(0,0)
    double sigma2_se = 0.0;  // sigma2_hat sqrt(2/(R-1))
    std::optional<AsymptoticSummary> analytic;
    std::optional<Matrix> lower_bound;
    std::optional<double> ratio;  // sigma2_hat / analytic sigma^2
    std::optional<Estimate> power;
    Estimate failures;
    std::optional<DelaySummary> delay;
};

// Aggregates in the order given. Concatenating the results of two ranges
// reproduces the full study exactly.
StudyReport summarize(const SimConfig& cfg, std::span<const ReplicateResult> results);
StudyReport run_study(const SimConfig& cfg);

// Two-sided Wald test of p_1 = p_2 (K = 2). The variance uses (S+1/2)/(N+1);
// the difference uses S/max(N,1).
bool wald_rejects(const ReplicateResult& r, double level);
Estimate wald_power(std::span<const ReplicateResult> results, double level);
Estimate expected_failures(std::span<const ReplicateResult> results);

// Reference values the design admits at p, if any.
std::optional<AsymptoticSummary> analytic_reference(const DesignSpec& spec, std::span<const double> p);
std::optional<Matrix> design_lower_bound(const DesignSpec& spec, std::span<const double> p);

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace alloclab
