#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "walklab/errors.hpp"
#include "walklab/params.hpp"

using namespace walklab;
using std::numbers::pi;

namespace {

double unitarity_defect(const WalkParams& p) {
    using C = std::complex<double>;
    const C g11 = std::conj(p.u11) * p.u11 + std::conj(p.u21) * p.u21;
    const C g12 = std::conj(p.u11) * p.u12 + std::conj(p.u21) * p.u22;
    const C g21 = std::conj(p.u12) * p.u11 + std::conj(p.u22) * p.u21;
    const C g22 = std::conj(p.u12) * p.u12 + std::conj(p.u22) * p.u22;
    return std::max({std::abs(g11 - 1.0), std::abs(g12), std::abs(g21), std::abs(g22 - 1.0)});
}

}  // namespace

TEST_CASE("hadamard point matches the canonical coin") {
    const WalkParams p = build_params({0, 0, 0, 0, 0, pi / 4}, 0.1);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(p.u11 - r) < 1e-15);
    CHECK(std::abs(p.u12 - r) < 1e-15);
    CHECK(std::abs(p.u21 - r) < 1e-15);
    CHECK(std::abs(p.u22 + r) < 1e-15);
    CHECK(std::abs(p.a0 - 1.0) < 1e-15);
    CHECK(std::abs(p.a1) < 1e-15);
}

TEST_CASE("unitarity and normalization for random valid angles") {
    // simple deterministic angle sweep
    for (int i = 0; i < 200; ++i) {
        Angles a;
        a.varsigma1 = -pi / 2 + pi * ((i * 37) % 101) / 100.0;
        a.varsigma2 = -pi / 2 + pi * ((i * 53) % 101) / 100.0;
        a.vartheta = pi / 2 * ((i * 29) % 101) / 100.0;
        a.gamma1 = -pi / 2 + pi * ((i * 71) % 101) / 100.0;
        a.gamma2 = -pi / 2 + pi * ((i * 13) % 101) / 100.0;
        a.phi = 0.1 + (pi / 2 - 0.2) * ((i * 17) % 101) / 100.0;
        const WalkParams p = build_params(a, 0.05);
        CHECK(std::abs(std::norm(p.a0) + std::norm(p.a1) - 1.0) < 1e-12);
        CHECK(unitarity_defect(p) < 1e-12);
        const double det = std::abs(p.u11 * p.u22 - p.u12 * p.u21);
        CHECK(std::abs(det - 1.0) < 1e-12);
        CHECK(std::abs(p.u11) >= 1e-9);
        CHECK(std::abs(p.u12) >= 1e-9);
    }
}

TEST_CASE("error taxonomy") {
    CHECK_THROWS_AS(build_params({0, 0, 0, 0, 0, -0.1}, 0.05), RangeError);
    CHECK_THROWS_AS(build_params({2.0, 0, 0, 0, 0, pi / 4}, 0.05), RangeError);
    CHECK_THROWS_AS(build_params({0, 0, 0, 0, 0, pi / 4}, 0.0), RangeError);
    CHECK_THROWS_AS(build_params({0, 0, 0, 0, 0, pi / 4}, 1.0), RangeError);
    // phi = 0 degenerates the coin before the margin check fires
    CHECK_THROWS_AS(build_params({0, 0, 0, 0, 0, 0.0}, 0.05), DegenerateCoin);
    CHECK_THROWS_AS(build_params({0, 0, 0, 0, 0, 0.01}, 0.05), MarginViolation);
}

TEST_CASE("symmetric point") {
    const WalkParams p = symmetric_point();
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(p.a0 - r) < 1e-15);
    CHECK(std::abs(p.a1 - std::complex<double>(0.0, r)) < 1e-15);
    CHECK(std::abs(std::abs(p.u11) - r) < 1e-15);
    const DerivedCoefficients d = derived_coefficients(p);
    CHECK(std::abs(d.varpi) < 1e-14);  // analytic cancellation
    CHECK(std::abs(d.abs_u11 - r) < 1e-15);
}

TEST_CASE("drift coefficient for the hadamard start (1,0)") {
    const DerivedCoefficients d = derived_coefficients(hadamard_point());
    CHECK(d.varpi == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("build_params is pure: equal inputs give bitwise-equal outputs") {
    const WalkParams a = build_params({0.3, -0.2, 0.7, 0.1, -0.4, 0.9}, 0.07);
    const WalkParams b = build_params({0.3, -0.2, 0.7, 0.1, -0.4, 0.9}, 0.07);
    CHECK(std::memcmp(&a.u11, &b.u11, sizeof(a.u11)) == 0);
    CHECK(std::memcmp(&a.a1, &b.a1, sizeof(a.a1)) == 0);
}

TEST_CASE("json round trip") {
    const WalkParams p = symmetric_point(0.08);
    const auto j = params_to_json(p);
    const WalkParams q = params_from_json(j);
    CHECK(q.angles.varsigma2 == p.angles.varsigma2);
    CHECK(q.kappa_margin == p.kappa_margin);
    CHECK(q.u12 == p.u12);
}
