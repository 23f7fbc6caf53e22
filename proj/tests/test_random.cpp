#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "alloclab/random.hpp"

using namespace alloclab;

// Published known-answer vectors for Philox4x32-10.
TEST_CASE("philox known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream is a pure function of its address") {
    RandomStream a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a() == b());
    CHECK(a.draws() == 100);

    RandomStream c(42, 7);
    c();
    RandomStream copy = c;
    CHECK(copy() == c());

    // first draw is the first two words of block 0
    RandomStream d(5, 9);
    const auto block = philox4x32_10({0, 0, 9, 0}, {5, 0});
    CHECK(d() == ((std::uint64_t(block[0]) << 32) | block[1]));
    CHECK(d() == ((std::uint64_t(block[2]) << 32) | block[3]));
}

TEST_CASE("distinct ids, lanes and seeds give distinct streams") {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t id = 0; id < 50; ++id)
        for (std::uint16_t lane = 0; lane < 3; ++lane) firsts.insert(RandomStream(1, id, lane)());
    for (std::uint64_t seed = 2; seed < 20; ++seed) firsts.insert(RandomStream(seed, 0)());
    CHECK(firsts.size() == 50 * 3 + 18);
}

TEST_CASE("uniform and exponential moments") {
    RandomStream rng(3, 0);
    const int n = 200000;
    double s = 0, s2 = 0, e = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(std::abs(s / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
    CHECK(std::abs(s2 / n - 1.0 / 3) < 0.005);
    for (int i = 0; i < n; ++i) e += rng.exponential(4.0);
    CHECK(std::abs(e / n - 0.25) < 4 * 0.25 / std::sqrt(n));

    const auto before = rng.draws();
    CHECK(rng.exponential(INFINITY) == 0.0);
    CHECK(rng.draws() == before + 1);
}

TEST_CASE("sample_index") {
    const std::vector<double> p{0.2, 0.0, 0.5, 0.3};
    CHECK(sample_index(p, 0.0) == 0);
    CHECK(sample_index(p, 0.1999) == 0);
    CHECK(sample_index(p, 0.2) == 2);
    CHECK(sample_index(p, 0.6999) == 2);
    CHECK(sample_index(p, 0.7) == 3);
    CHECK(sample_index(p, 0.99999999) == 3);
    // rounding slack never lands on a zero-probability arm
    CHECK(sample_index(std::vector<double>{0.5, 0.4999999, 0.0}, 0.9999999999) == 1);
}
