#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "walklab/rng.hpp"

using namespace walklab;

TEST_CASE("philox known-answer vectors") {
    // Frozen against the reference implementation (numpy's Philox bit
    // generator produces the same blocks with its counter pre-incremented).
    const auto b0 = philox4x64({0, 0, 0, 0}, {0, 0});
    CHECK(b0[0] == 0x16554d9eca36314cULL);
    CHECK(b0[1] == 0xdb20fe9d672d0fdcULL);
    CHECK(b0[2] == 0xd7e772cee186176bULL);
    CHECK(b0[3] == 0x7e68b68aec7ba23bULL);

    const auto b1 = philox4x64({1, 0, 0, 0}, {0, 0});
    CHECK(b1[0] == 0x02f4ba6408e4d89bULL);
    CHECK(b1[1] == 0x3dd62b0b9ca8c5b2ULL);
    CHECK(b1[2] == 0x1c8667a55d902e79ULL);
    CHECK(b1[3] == 0x907d7a052fd5b4dcULL);

    const auto b2 = philox4x64({5, 6, 7, 8}, {0xa, 0xb});
    CHECK(b2[0] == 0x949046bc72470adfULL);
    CHECK(b2[1] == 0xdf29ed14d0398649ULL);
    CHECK(b2[2] == 0x540d9415c18d67e0ULL);
    CHECK(b2[3] == 0xbf56de81363fa999ULL);
}

TEST_CASE("streams are deterministic and distinct") {
    RandomStream a(42, 0), b(42, 0), c(42, 1);
    bool any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t va = a.next_u64();
        CHECK(va == b.next_u64());
        if (va != c.next_u64()) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("uniform stays in (0, 1]") {
    RandomStream s(7, 3);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("gaussian moments") {
    RandomStream s(11, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = s.gaussian();
        sum += g;
        sum2 += g * g;
        sum4 += g * g * g * g;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    const double kurt = sum4 / n;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
    CHECK(std::abs(kurt - 3.0) < 0.1);
}
