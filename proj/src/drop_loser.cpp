#include "alloclab/drop_loser.hpp"

#include <numeric>
#include <stdexcept>

namespace alloclab {

DLUrnState DLUrnState::initial(std::size_t arms, std::int64_t per_arm) {
    DLUrnState urn{std::vector<std::int64_t>(arms + 1, per_arm)};
    urn.counts[0] = 1;
    urn.validate();
    return urn;
}

std::int64_t DLUrnState::treatment_total() const {
    return std::accumulate(counts.begin() + 1, counts.end(), std::int64_t{0});
}

void DLUrnState::validate() const {
    if (counts.size() < 3 || counts.size() > kMaxArms + 1)
        throw std::invalid_argument("dl.initial: need an immigration count plus 2..8 arm counts");
    if (counts[0] < 1) throw std::invalid_argument("dl.initial: need at least one immigration ball");
    for (std::int64_t c : counts)
        if (c < 0) throw std::invalid_argument("dl.initial: ball counts must be nonnegative");
}

Assignment dl_draw(DLUrnState& urn, RandomStream& rng) {
    const std::size_t k = urn.arms();
    for (std::int64_t draws = 0; draws < kMaxImmigrationDraws; ++draws) {
        const std::int64_t total = urn.immigration() + urn.treatment_total();
        const double pick = rng.uniform() * static_cast<double>(total);
        double acc = static_cast<double>(urn.counts[0]);
        if (pick < acc) {
            for (std::size_t j = 1; j <= k; ++j) ++urn.counts[j];
            continue;
        }
        for (std::size_t j = 1; j <= k; ++j) {
            acc += static_cast<double>(urn.counts[j]);
            if (pick < acc && urn.counts[j] > 0) {
                --urn.counts[j];
                return {j - 1};
            }
        }
        // pick landed on the rounding edge; take the last nonempty type
        for (std::size_t j = k; j >= 1; --j) {
            if (urn.counts[j] > 0) {
                --urn.counts[j];
                return {j - 1};
            }
        }
    }
    throw std::runtime_error("dl_draw: immigration loop exceeded its iteration cap");
}

void dl_settle(DLUrnState& urn, Assignment arm, Outcome outcome) {
    if (arm.arm >= urn.arms()) throw std::out_of_range("dl_settle: arm index out of range");
    if (outcome.success) ++urn.counts[arm.arm + 1];
}

std::tuple<Assignment, Outcome, DLUrnState> dl_next(DLUrnState urn, const BernoulliArms& arms,
                                                     RandomStream& rng) {
    if (arms.size() != urn.arms()) throw std::invalid_argument("dl_next: arm count mismatch");
    const Assignment a = dl_draw(urn, rng);
    const Outcome o = draw_bernoulli(arms, a.arm, rng);
    dl_settle(urn, a, o);
    return {a, o, std::move(urn)};
}

std::vector<double> dl_assignment_probabilities(const DLUrnState& urn) {
    const std::size_t k = urn.arms();
    const double z0 = static_cast<double>(urn.immigration());
    const double t = static_cast<double>(urn.treatment_total());
    std::vector<double> prob(k, 0.0);
    double reach = 1.0;  // probability that the first j draws were all immigration
    for (int j = 0; reach > 1e-17 && j < 100000; ++j) {
        const double total = z0 + t + static_cast<double>(j) * static_cast<double>(k);
        for (std::size_t a = 0; a < k; ++a)
            prob[a] += reach * (static_cast<double>(urn.counts[a + 1]) + j) / total;
        reach *= z0 / total;
    }
    const double s = std::accumulate(prob.begin(), prob.end(), 0.0);
    for (double& x : prob) x /= s;
    return prob;
}

}  // namespace alloclab
