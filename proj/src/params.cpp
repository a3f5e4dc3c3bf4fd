#include "walklab/params.hpp"

#include <cmath>
#include <numbers>

#include "walklab/errors.hpp"

namespace walklab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEntryFloor = 1e-9;  // hard floor for |u_ij| != 0

void check_range(const char* name, double v, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
        throw RangeError(std::string(name) + " out of range");
    }
}

}  // namespace

WalkParams build_params(const Angles& angles, double kappa_margin) {
    check_range("varsigma1", angles.varsigma1, -kPi / 2, kPi / 2);
    check_range("varsigma2", angles.varsigma2, -kPi / 2, kPi / 2);
    check_range("gamma1", angles.gamma1, -kPi / 2, kPi / 2);
    check_range("gamma2", angles.gamma2, -kPi / 2, kPi / 2);
    check_range("vartheta", angles.vartheta, 0.0, kPi / 2);
    check_range("phi", angles.phi, 0.0, kPi / 2);
    if (!(kappa_margin > 0.0 && kappa_margin < kPi / 4)) {
        throw RangeError("kappa_margin out of range");
    }

    WalkParams p;
    p.angles = angles;
    p.kappa_margin = kappa_margin;

    const double c = std::cos(angles.phi);
    const double s = std::sin(angles.phi);
    p.a0 = std::polar(std::cos(angles.vartheta), angles.varsigma1);
    p.a1 = std::polar(std::sin(angles.vartheta), angles.varsigma2);
    p.u11 = std::polar(c, angles.gamma1);
    p.u12 = std::polar(s, angles.gamma2);
    p.u21 = std::polar(s, -angles.gamma2);
    p.u22 = -std::polar(c, -angles.gamma1);

    if (c < kEntryFloor || s < kEntryFloor) {
        throw DegenerateCoin("coin entry modulus below 1e-9; u11*u12*u21*u22 must be nonzero");
    }
    if (!(angles.phi >= kappa_margin && angles.phi <= kPi / 2 - kappa_margin)) {
        throw MarginViolation("phi outside [kappa, pi/2 - kappa]");
    }
    return p;
}

WalkParams symmetric_point(double kappa_margin) {
    return build_params({0.0, kPi / 2, kPi / 4, 0.0, 0.0, kPi / 4}, kappa_margin);
}

WalkParams hadamard_point(double kappa_margin) {
    return build_params({0.0, 0.0, 0.0, 0.0, 0.0, kPi / 4}, kappa_margin);
}

double drift_coefficient(const WalkParams& p) {
    const double mod2 = std::norm(p.a0) - std::norm(p.a1);
    const std::complex<double> cross = p.u11 * p.a0 * std::conj(p.u12 * p.a1);
    return mod2 + 2.0 * cross.real() / std::norm(p.u11);
}

DerivedCoefficients derived_coefficients(const WalkParams& p) {
    DerivedCoefficients d;
    d.abs_u11 = std::abs(p.u11);
    d.varpi = drift_coefficient(p) * d.abs_u11;
    return d;
}

nlohmann::ordered_json params_to_json(const WalkParams& p) {
    return {{"varsigma1", p.angles.varsigma1}, {"varsigma2", p.angles.varsigma2},
            {"vartheta", p.angles.vartheta},   {"gamma1", p.angles.gamma1},
            {"gamma2", p.angles.gamma2},       {"phi", p.angles.phi},
            {"kappa_margin", p.kappa_margin}};
}

WalkParams params_from_json(const nlohmann::json& j) {
    Angles a;
    a.varsigma1 = j.at("varsigma1").get<double>();
    a.varsigma2 = j.at("varsigma2").get<double>();
    a.vartheta = j.at("vartheta").get<double>();
    a.gamma1 = j.at("gamma1").get<double>();
    a.gamma2 = j.at("gamma2").get<double>();
    a.phi = j.at("phi").get<double>();
    const double kappa = j.value("kappa_margin", kDefaultKappaMargin);
    return build_params(a, kappa);
}

}  // namespace walklab
