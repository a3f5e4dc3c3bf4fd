#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "walklab/errors.hpp"
#include "walklab/limitlaw.hpp"
#include "walklab/params.hpp"
#include "walklab/walk.hpp"

using namespace walklab;
using std::numbers::pi;

namespace {

// Independent oracle: composite Simpson in the substituted variable
// x = a sin u over [u_lo, u_hi], 2^17 panels. Deliberately not the adaptive
// rule the library uses.
template <typename F>
double simpson_oracle(const F& f, double lo, double hi) {
    const int n = 1 << 17;
    const double h = (hi - lo) / n;
    double acc = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(lo + h * i) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double oracle_mass(const KonnoLaw& law, double z_lo, double z_hi) {
    const double a = law.coeffs.abs_u11;
    const double d = double(law.drift_sign) * law.drift_coeff;
    const auto g = [&](double u) {
        const double s = std::sin(u);
        return std::sqrt(1.0 - a * a) * (1.0 - d * a * s) / (pi * (1.0 - a * a * s * s));
    };
    return simpson_oracle(g, std::asin(z_lo), std::asin(z_hi));
}

}  // namespace

TEST_CASE("transform is an exact inverse pair") {
    const TransformSpec spec{1.0 / std::sqrt(2.0)};
    CHECK(transform_forward(std::log(2.0), spec) ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
    for (double y : {-10.0, -1.0, -0.1, 0.1, 1.0, 10.0}) {
        CHECK(std::abs(transform_inverse(transform_forward(y, spec), spec) - y) < 1e-12);
    }
    CHECK(transform_forward(50.0, spec) > 0.0);
    CHECK(transform_forward(50.0, spec) < 1e-20);
    CHECK_THROWS_AS(transform_forward(0.0, spec), DomainError);
    CHECK_THROWS_AS(transform_inverse(0.0, spec), DomainError);
    CHECK_THROWS_AS(transform_inverse(0.8, spec), DomainError);
}

TEST_CASE("symmetric-point density values") {
    const KonnoLaw law = make_konno_law(symmetric_point());
    CHECK(konno_pdf(0.0, law) == doctest::Approx(1.0 / pi).epsilon(1e-12));
    // 1 / (pi (1-x^2) sqrt(1-2x^2)) at x = 1/2
    const double want = 1.0 / (pi * 0.75 * std::sqrt(0.5));
    CHECK(konno_pdf(0.5, law) == doctest::Approx(want).epsilon(1e-12));
    CHECK(konno_pdf(0.8, law) == 0.0);
    CHECK(std::isinf(konno_pdf(law.coeffs.abs_u11, law)));
}

TEST_CASE("drift sign is resolved against the exact walk") {
    const KonnoLaw law = make_konno_law(hadamard_point());
    // the hadamard (1,0) walk drifts right; the density mean must agree
    CHECK(law.resolution_mean > 1e-3);
    const double mean = moment(law, 1);
    CHECK(mean * law.resolution_mean > 0.0);
    CHECK(std::abs(mean) > 0.1);
    // mean = -s * drift * (1 - sqrt(1-a^2))
    const double predicted = -double(law.drift_sign) * law.drift_coeff *
                             (1.0 - std::sqrt(1.0 - std::norm(law.params.u11)));
    CHECK(mean == doctest::Approx(predicted).epsilon(1e-9));
}

TEST_CASE("change of variables identity between the two densities") {
    for (const WalkParams& p : {symmetric_point(), hadamard_point()}) {
        const KonnoLaw law = make_konno_law(p);
        const TransformSpec spec{law.coeffs.abs_u11};
        for (int i = 1; i <= 1000; ++i) {
            const double y = -8.0 + 16.0 * double(i) / 1001.0;
            if (std::abs(y) < 1e-3) continue;
            const double x = transform_forward(y, spec);
            const double lhs = pi_pdf(y, law);
            const double rhs = konno_pdf(x, law) * std::abs(x);  // |dT/dy| = |x|
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + rhs));
        }
        CHECK_THROWS_AS(pi_pdf(0.0, law), DomainError);
    }
}

TEST_CASE("pi tails decay like e^{-|y|}") {
    const KonnoLaw law = make_konno_law(symmetric_point());
    const double c = std::sqrt(1.0 - std::norm(law.params.u11)) / pi;
    for (double y : {8.0, 12.0, 16.0}) {
        CHECK(pi_pdf(y, law) == doctest::Approx(c * std::exp(-y)).epsilon(1e-3));
    }
}

TEST_CASE("cdf table properties") {
    const KonnoLaw law = make_konno_law(hadamard_point());
    const double a = law.coeffs.abs_u11;
    CHECK(konno_cdf(-a, law) == 0.0);
    CHECK(konno_cdf(a, law) == 1.0);
    double prev = -1.0;
    for (int i = 0; i <= 500; ++i) {
        const double x = -a + 2.0 * a * double(i) / 500.0;
        const double c = konno_cdf(x, law);
        CHECK(c >= prev);
        prev = c;
    }
    // round trip through the inverse
    for (double v : {0.01, 0.2, 0.5, 0.77, 0.999}) {
        CHECK(konno_cdf(law.table->invert(v), law) == doctest::Approx(v).epsilon(1e-7));
    }
}

TEST_CASE("kappa identities and scaling") {
    const KonnoLaw law = make_konno_law(symmetric_point());
    const double a = law.coeffs.abs_u11;
    SUBCASE("mass-balance identity to 1e-10, dual quadrature routes") {
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
            const double deficit = regularization_tail_mass(eps, law);
            const double deficit_y = regularization_tail_mass_y(eps, law);
            CHECK(std::abs(deficit - deficit_y) < 1e-10);
            CHECK(std::abs(2.0 * eps * a * kappa_eps_x(eps, law) - deficit) < 1e-10);
            CHECK(std::abs(-2.0 * std::log1p(-eps) * kappa_eps_y(eps, law) - deficit) < 1e-10);
            // oracle route for the deficit itself
            const double inner = oracle_mass(law, -(1.0 - eps), 1.0 - eps);
            CHECK(std::abs((1.0 - inner) - deficit) < 1e-9);
        }
    }
    SUBCASE("leading-order constant (y-form)") {
        const double eps = 1e-4;
        const double lead = std::sqrt(2.0) / (pi * std::sqrt(eps) * std::sqrt(1.0 - a * a));
        CHECK(kappa_eps_y(eps, law) / lead == doctest::Approx(1.0).epsilon(0.02));
        // the x-form differs by the 1/|u11| jacobian factor
        CHECK(kappa_eps_x(eps, law) / lead == doctest::Approx(1.0 / a).epsilon(0.02));
    }
    SUBCASE("sqrt-eps scaling") {
        CHECK(kappa_eps_x(1e-4, law) / kappa_eps_x(1e-2, law) ==
              doctest::Approx(10.0).epsilon(0.05));
    }
    CHECK_THROWS_AS(kappa_eps_x(0.7, law), RangeError);
}

TEST_CASE("regularized law normalizes in both forms") {
    for (const WalkParams& p : {symmetric_point(), hadamard_point()}) {
        const KonnoLaw base = make_konno_law(p);
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            const RegularizedLaw law = regularize(base, eps);
            // x-form: integrate f_eps via its own cdf endpoints plus spot checks
            CHECK(f_eps_cdf(law.base.coeffs.abs_u11, law) == doctest::Approx(1.0).epsilon(1e-8));
            // y-form mass: plateau + two tails
            const double total = pi_eps_cdf(745.0, law);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
            // plateau geometry
            CHECK(law.y_plateau == doctest::Approx(-std::log(1.0 - eps)).epsilon(1e-12));
            CHECK(f_eps_pdf((law.x_inner + law.base.coeffs.abs_u11) / 2.0, law) ==
                  doctest::Approx(law.kappa_x).epsilon(1e-12));
            CHECK(pi_eps_pdf(0.0, law) == doctest::Approx(law.kappa_y).epsilon(1e-12));
        }
    }
}

TEST_CASE("tv between the law and its regularization obeys the margin bound") {
    const KonnoLaw base = make_konno_law(symmetric_point());
    for (double eps : {1e-2, 1e-3}) {
        const RegularizedLaw law = regularize(base, eps);
        // half-L1 between f and f_eps concentrates on the endcaps
        const double a = base.coeffs.abs_u11;
        const int n = 40000;
        double l1 = 0.0;
        // integrate |f - kappa_x| over the right endcap by fine midpoint and
        // double it (symmetric law)
        const double lo = law.x_inner, hi = a;
        for (int i = 0; i < n; ++i) {
            const double x = lo + (hi - lo) * (double(i) + 0.5) / double(n);
            l1 += std::abs(konno_pdf(x, base) - law.kappa_x) * (hi - lo) / double(n);
        }
        const double tv = l1;  // 2 endcaps, times 1/2
        const double margin = symmetric_point().kappa_margin;
        const double bound = 2.0 * std::sqrt(2.0 * eps) / (pi * std::tan(margin)) +
                             10.0 * std::pow(eps, 1.5);
        CHECK(tv <= bound);
        CHECK(tv > 0.0);
    }
}

TEST_CASE("lattice projection") {
    const KonnoLaw law = make_konno_law(symmetric_point());
    SUBCASE("full mode: total mass and midpoint value") {
        const LatticeDist d = lattice_projection(law, 1000, ParityMode::full);
        CHECK(std::abs(d.total_mass() - 1.0) < 1e-8);
        CHECK(d.prob(0) == doctest::Approx(konno_pdf(0.0, law) / 1000.0).epsilon(0.01));
    }
    SUBCASE("sublattice mode: parity-aligned cells of width 2/t") {
        const LatticeDist d = lattice_projection(law, 1000, ParityMode::sublattice);
        CHECK(std::abs(d.total_mass() - 1.0) < 1e-8);
        CHECK(d.prob(1) == 0.0);  // odd site, t even
        CHECK(d.prob(0) == doctest::Approx(2.0 * konno_pdf(0.0, law) / 1000.0).epsilon(0.01));
    }
    SUBCASE("tail mass matches the sqrt-zeta law within 20%") {
        // Edge expansion of the density: f ~ 2^{1/4} / (pi sqrt(L - x)), so
        // the mass of both zeta-bands is 2^{9/4} sqrt(zeta) / pi + O(zeta^{3/2}).
        const double zeta = 1e-2;
        const LatticeDist d = lattice_projection(law, 4000, ParityMode::full);
        double tail = 0.0;
        for (std::size_t j = 0; j < d.probs.size(); ++j) {
            const double x = double(d.offset + std::int64_t(j)) / 4000.0;
            if (std::abs(x) > 1.0 / std::sqrt(2.0) - zeta) tail += d.probs[j];
        }
        const double want = std::pow(2.0, 2.25) * std::sqrt(zeta) / pi;
        CHECK(std::abs(tail - want) / want < 0.2);
    }
}

TEST_CASE("moments at the symmetric point") {
    const KonnoLaw law = make_konno_law(symmetric_point());
    CHECK(std::abs(moment(law, 1)) < 1e-8);
    CHECK(moment(law, 2) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-6 / 0.29));
    CHECK(absolute_moment(law, 1) == doctest::Approx(0.5).epsilon(1e-6 / 0.5));
    // fourth moment sanity against the oracle
    const double a = law.coeffs.abs_u11;
    const auto g4 = [&](double u) {
        const double s = std::sin(u);
        const double x = a * s;
        return x * x * x * x * std::sqrt(1.0 - a * a) / (pi * (1.0 - a * a * s * s));
    };
    CHECK(moment(law, 4) == doctest::Approx(simpson_oracle(g4, -pi / 2, pi / 2)).epsilon(1e-8));
    CHECK_THROWS_AS(moment(law, 3), RangeError);
}

TEST_CASE("sampling matches the law") {
    const KonnoLaw base = make_konno_law(symmetric_point());
    SUBCASE("base law second moment") {
        const auto xs = sample(base, 200000, 1234);
        double m2 = 0.0;
        for (double x : xs) m2 += x * x;
        m2 /= double(xs.size());
        CHECK(m2 == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(0.01));
    }
    SUBCASE("regularized law: empirical cdf tracks f_eps_cdf") {
        const RegularizedLaw law = regularize(base, 0.05);
        auto xs = sample(law, 100000, 77);
        std::sort(xs.begin(), xs.end());
        for (double q : {0.1, 0.25, 0.5, 0.9, 0.99}) {
            const double emp = xs[std::size_t(q * double(xs.size()))];
            const double want = f_eps_quantile(q, law);
            CHECK(std::abs(f_eps_cdf(emp, law) - f_eps_cdf(want, law)) < 0.01);
        }
        // determinism
        const auto ys = sample(law, 100, 4242);
        const auto zs = sample(law, 100, 4242);
        CHECK(ys == zs);
    }
}

TEST_CASE("quantiles invert the cdfs") {
    const RegularizedLaw law = regularize(make_konno_law(symmetric_point()), 0.05);
    for (double p : {0.001, 0.2, 0.5, 0.8, 0.999}) {
        CHECK(f_eps_cdf(f_eps_quantile(p, law), law) == doctest::Approx(p).epsilon(1e-6));
        CHECK(pi_eps_cdf(pi_eps_quantile(p, law), law) == doctest::Approx(p).epsilon(1e-6));
    }
}
