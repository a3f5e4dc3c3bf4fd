#pragma once

#include <complex>

#include "json.hpp"

namespace walklab {

struct Angles {
    double varsigma1 = 0.0;  // coin-state phase of a0,      [-pi/2, pi/2]
    double varsigma2 = 0.0;  // coin-state phase of a1,      [-pi/2, pi/2]
    double vartheta = 0.0;   // coin-state mixing angle,     [0, pi/2]
    double gamma1 = 0.0;     // coin-operator phase,         [-pi/2, pi/2]
    double gamma2 = 0.0;     // coin-operator phase,         [-pi/2, pi/2]
    double phi = 0.0;        // coin-operator mixing angle,  [0, pi/2]
};

// Validated walk parameter point. Angles are canonical; the complex entries
// are always derived from them, never stored independently.
struct WalkParams {
    Angles angles;
    double kappa_margin = 0.05;  // phi must stay in [kappa, pi/2 - kappa]

    std::complex<double> a0, a1;              // initial coin state
    std::complex<double> u11, u12, u21, u22;  // coin operator entries
};

struct DerivedCoefficients {
    double abs_u11 = 0.0;  // support bound of the limit law
    double varpi = 0.0;    // drift coefficient, in [-1, 1]
};

inline constexpr double kDefaultKappaMargin = 0.05;

WalkParams build_params(const Angles& angles, double kappa_margin = kDefaultKappaMargin);

// Symmetric point: zero drift, symmetric walk distribution.
WalkParams symmetric_point(double kappa_margin = kDefaultKappaMargin);

// Hadamard coin with initial coin state (1, 0).
WalkParams hadamard_point(double kappa_margin = kDefaultKappaMargin);

DerivedCoefficients derived_coefficients(const WalkParams& p);

// The bracketed drift factor of the limit density before the |u11| scaling;
// varpi = drift_coefficient * |u11|.
double drift_coefficient(const WalkParams& p);

nlohmann::ordered_json params_to_json(const WalkParams& p);
WalkParams params_from_json(const nlohmann::json& j);

}  // namespace walklab
