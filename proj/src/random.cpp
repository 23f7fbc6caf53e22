#include "alloclab/random.hpp"

#include <cmath>

namespace alloclab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

RandomStream::result_type RandomStream::operator()() {
    const std::uint64_t block = draws_ >> 1;
    if ((draws_ & 1u) == 0) {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(block),
            static_cast<std::uint32_t>((block >> 32) & 0xFFFFu) |
                (static_cast<std::uint32_t>(lane_) << 16),
            static_cast<std::uint32_t>(stream_),
            static_cast<std::uint32_t>(stream_ >> 32)};
        block_ = philox4x32_10(ctr, {static_cast<std::uint32_t>(seed_),
                                     static_cast<std::uint32_t>(seed_ >> 32)});
    }
    const std::size_t half = (draws_ & 1u) * 2;
    ++draws_;
    return (static_cast<std::uint64_t>(block_[half]) << 32) | block_[half + 1];
}

double RandomStream::exponential(double rate) {
    const double u = uniform();
    if (std::isinf(rate)) return 0.0;
    return -std::log1p(-u) / rate;
}

}  // namespace alloclab
