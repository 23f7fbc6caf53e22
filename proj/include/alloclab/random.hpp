// random.hpp: counter-based per-replicate random streams.
#pragma once
#include <array>
#include <cstdint>
#include <limits>

namespace alloclab {

// Philox4x32-10 block function. Pure: the output depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// A random stream addressed by (master_seed, stream_id, lane).
//
// The draw sequence is a pure function of the address: block b of the stream
// is philox(counter = {b_lo, b_hi | lane << 48, id_lo, id_hi}, key = seed).
// Distinct stream ids (or lanes) never share a counter block. There is no
// global state; copying a stream copies its position.
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id,
                 std::uint16_t lane = 0)
        : seed_(master_seed), stream_(stream_id), lane_(lane) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    // Uniform on [0, 1) with 53 random bits. Consumes one 64-bit draw.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Exponential with the given rate (events per unit time). An infinite
    // rate yields 0 but still consumes one draw.
    double exponential(double rate);

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint16_t lane() const { return lane_; }
    std::uint64_t draws() const { return draws_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint16_t lane_;
    std::uint64_t draws_ = 0;
    std::array<std::uint32_t, 4> block_{};
};

// Picks index k with probability probs[k] using a single uniform draw.
// probs must be nonnegative and sum to (approximately) one.
template <class Probs>
std::size_t sample_index(const Probs& probs, double u) {
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= 0.0) continue;
        acc += probs[k];
        last = k;
        if (u < acc) return k;
    }
    return last;
}

}  // namespace alloclab
