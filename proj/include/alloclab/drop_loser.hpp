// drop_loser.hpp: the drop-the-loser urn with an immigration ball type.
#pragma once
#include <cstdint>
#include <tuple>
#include <vector>

#include "alloclab/core.hpp"

namespace alloclab {

// counts[0] is the immigration type; counts[1..K] are treatment types.
struct DLUrnState {
    std::vector<std::int64_t> counts;

    // One immigration ball and `per_arm` balls of each treatment type.
    static DLUrnState initial(std::size_t arms, std::int64_t per_arm = 1);

    std::size_t arms() const { return counts.size() - 1; }
    std::int64_t immigration() const { return counts[0]; }
    std::int64_t treatment_total() const;
    void validate() const;
};

// Hard cap on immigration draws between two assignments.
inline constexpr std::int64_t kMaxImmigrationDraws = 1'000'000;

// Draws until a treatment ball appears. Every immigration draw returns the
// ball and adds one ball of each treatment type. The treatment ball that ends
// the loop is taken out of the urn and its arm returned; settle() puts it
// back on success and discards it on failure.
Assignment dl_draw(DLUrnState& urn, RandomStream& rng);
void dl_settle(DLUrnState& urn, Assignment arm, Outcome outcome);

// Full immediate-response step: draw, treat, settle.
std::tuple<Assignment, Outcome, DLUrnState> dl_next(DLUrnState urn, const BernoulliArms& arms,
                                                     RandomStream& rng);

// Exact probability that the next subject receives each arm, summing over the
// possible run of immigration draws that precede the treatment ball.
std::vector<double> dl_assignment_probabilities(const DLUrnState& urn);

}  // namespace alloclab
