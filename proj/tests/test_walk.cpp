#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "support/naive_walk.hpp"
#include "walklab/errors.hpp"
#include "walklab/params.hpp"
#include "walklab/walk.hpp"

using namespace walklab;

TEST_CASE("hadamard hand values at t = 1, 2, 3") {
    const WalkParams p = hadamard_point();
    {
        const LatticeDist d = evolve(p, 1);
        CHECK(d.prob(-1) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.prob(1) == doctest::Approx(0.5).epsilon(1e-12));
    }
    {
        const LatticeDist d = evolve(p, 2);
        CHECK(d.prob(-2) == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(d.prob(0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.prob(2) == doctest::Approx(0.25).epsilon(1e-12));
    }
    {
        const LatticeDist d = evolve(p, 3);
        CHECK(d.prob(-3) == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(d.prob(-1) == doctest::Approx(0.125).epsilon(1e-12));
        CHECK(d.prob(1) == doctest::Approx(0.625).epsilon(1e-12));
        CHECK(d.prob(3) == doctest::Approx(0.125).epsilon(1e-12));
    }
}

TEST_CASE("single step matches the hand evolution") {
    const WalkParams p = hadamard_point();
    const WalkState s1 = step(init_state(p), p);
    CHECK(s1.t == 1);
    const LatticeDist d = distribution(s1);
    CHECK(d.prob(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.prob(-1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("packed evolution agrees with the dense oracle") {
    const Angles angles[] = {
        {0, 0, 0, 0, 0, std::numbers::pi / 4},
        {0, std::numbers::pi / 2, std::numbers::pi / 4, 0, 0, std::numbers::pi / 4},
        {0.3, -0.4, 0.9, 0.2, -0.1, 0.6},
        {-0.7, 0.2, 1.1, -0.3, 0.5, 1.0},
    };
    for (const Angles& a : angles) {
        const WalkParams p = build_params(a, 0.05);
        for (std::int64_t t : {0, 1, 2, 5, 17, 64, 129}) {
            const LatticeDist got = evolve(p, t);
            const testing::NaiveDist want = testing::naive_evolve(p, t);
            for (std::int64_t k = -t; k <= t; ++k) {
                CHECK(std::abs(got.prob(k) - want.prob(k)) < 1e-12);
            }
        }
    }
}

TEST_CASE("unitarity, parity, support") {
    const WalkParams p = symmetric_point();
    const LatticeDist d = evolve(p, 501);
    CHECK(std::abs(d.total_mass() - 1.0) < 1e-10);
    for (std::int64_t k = -501; k <= 501; ++k) {
        if ((k + 501) % 2 != 0) CHECK(d.prob(k) == 0.0);
    }
    CHECK(d.prob(502) == 0.0);
    CHECK(d.prob(-502) == 0.0);
}

TEST_CASE("symmetric point gives a symmetric distribution") {
    const LatticeDist d = evolve(symmetric_point(), 256);
    for (std::int64_t k = 0; k <= 256; ++k) {
        CHECK(std::abs(d.prob(k) - d.prob(-k)) < 1e-10);
    }
}

TEST_CASE("ballistic spread at the symmetric point") {
    // std/t approaches sqrt(1 - 1/sqrt2) ~ 0.5412
    const double target = std::sqrt(1.0 - 1.0 / std::sqrt(2.0));
    for (std::int64_t t : {256, 1024, 4096}) {
        const LatticeDist d = evolve(symmetric_point(), t);
        const double sd = std::sqrt(d.second_moment()) / double(t);
        CHECK(std::abs(sd - target) < 0.01);
    }
}

TEST_CASE("evolve cap") {
    CHECK_THROWS_AS(evolve(hadamard_point(), kMaxWalkSteps + 1), CapExceeded);
    CHECK_THROWS_AS(evolve(hadamard_point(), -1), RangeError);
}

TEST_CASE("randomize window values") {
    const WalkParams p = hadamard_point();
    const LatticeDist d = evolve(p, 3);
    SUBCASE("r = 1 window at y = 1") {
        // eta t in [1, 2) -> r = 1; value(1) = (p(0) + p(1)) / 2 = 5/16
        const RandomizedDist rd = randomize(d, 0.4);
        REQUIRE(rd.r == 1);
        CHECK(rd.prob(1) == doctest::Approx(5.0 / 16.0).epsilon(1e-12));
        CHECK(rd.prob(0) == doctest::Approx((0.125 + 0.0) / 2.0).epsilon(1e-12));
        CHECK(std::abs(rd.total_mass() - 1.0) < 1e-12);
    }
    SUBCASE("degenerate window returns the input") {
        const RandomizedDist rd = randomize(d, 0.2);  // floor(0.6) = 0
        CHECK(rd.r == 0);
        CHECK(rd.probs == d.probs);
    }
    SUBCASE("window identity against direct sums") {
        const LatticeDist big = evolve(p, 64);
        const RandomizedDist rd = randomize(big, 0.1);  // r = 6
        REQUIRE(rd.r == 6);
        for (std::int64_t y : {-70, -3, 0, 1, 33, 70}) {
            double acc = 0.0;
            for (std::int64_t k = y - 6; k <= y + 5; ++k) acc += big.prob(k);
            CHECK(std::abs(rd.prob(y) - acc / 12.0) < 1e-12);
        }
        CHECK(std::abs(rd.total_mass() - big.total_mass()) < 1e-12);
    }
}

TEST_CASE("smooth_pdf mass and delta spreading") {
    const WalkParams p = hadamard_point();
    SUBCASE("integrates to one") {
        const LatticeDist d = evolve(p, 64);
        const DensityGrid g = smooth_pdf(d, 0.1, {-1.2, 1.2, 256});
        CHECK(std::abs(g.integral() - 1.0) < 1e-8);
    }
    SUBCASE("point mass becomes a uniform plateau of height 1/(2 eta)") {
        LatticeDist delta;
        delta.t = 4;
        delta.offset = 0;
        delta.probs = {1.0};
        const DensityGrid g = smooth_pdf(delta, 0.1, {-1.2, 1.2, 960});
        // interior of (-0.1, 0.1]
        const double width = g.cell_width();
        const int mid = int((0.0 - g.lo) / width);
        CHECK(g.pdf[std::size_t(mid + 1)] == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(g.pdf[std::size_t(mid - 1)] == doctest::Approx(5.0).epsilon(1e-9));
        CHECK(std::abs(g.integral() - 1.0) < 1e-8);
    }
    SUBCASE("grid guards") {
        const LatticeDist d = evolve(p, 16);
        CHECK_THROWS_AS(smooth_pdf(d, 0.05, {-1.2, 1.2, 64}), GridTooCoarse);
        CHECK_THROWS_AS(smooth_pdf(d, 0.05, {-0.5, 1.2, 4096}), RangeError);
    }
}

TEST_CASE("smoothed cdf is consistent with cell masses") {
    const WalkParams p = symmetric_point();
    const LatticeDist d = evolve(p, 128);
    const double eta = 0.05;
    const DensityGrid g = smooth_pdf(d, eta, {-1.2, 1.2, 2048});
    const double w = g.cell_width();
    for (int c : {100, 512, 1024, 1500}) {
        const double a = g.lo + w * c;
        const double mass = smoothed_cdf(d, eta, a + w) - smoothed_cdf(d, eta, a);
        CHECK(std::abs(mass - g.pdf[std::size_t(c)] * w) < 1e-12);
    }
}
