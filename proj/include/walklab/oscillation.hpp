#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "walklab/params.hpp"

namespace walklab {

// Phase data of the fast oscillatory component of the scaled walk
// distribution, defined on x in (-1/sqrt2, 1/sqrt2) for the unbiased
// (phi = pi/4) coin family.
struct PhasePoint {
    double x = 0.0;
    double alpha = 0.0;  // arccos(x / sqrt(1-x^2)), in [0, pi]
    double beta = 0.0;   // arccos((2x-1) / (sqrt2 (1-x))), in [0, pi]
    double omega = 0.0;  // arcsin(sin(alpha) / sqrt2)
};

PhasePoint phase_point(double x);

// Total phase Phi(x, t) = 2 [omega + x alpha] t - beta and its x-derivative.
double oscillation_phase(double x, std::int64_t t);
double oscillation_phase_derivative(double x, std::int64_t t);

// H(x, t) = sqrt2 x sin(Phi(x, t) + delta); delta defaults to 0.
double h_oscillation(double x, std::int64_t t, double delta = 0.0);

struct NodeSet {
    std::vector<double> nodes;     // zeros of H's sine factor, strictly increasing in x
    std::vector<double> midphase;  // one quarter-period point per consecutive node gap
};

// All solutions of Phi = pi * l with |x| <= 1/sqrt2 - 4e-5, found by
// bracketing on the monotone phase pieces and polished by Newton steps. The
// 4e-5 edge slivers are excluded: the phase slope there exceeds what double
// precision can resolve to the 1e-9 node tolerance.
NodeSet oscillation_nodes(std::int64_t t);

// integral of |H(x, t)| over the support, subdivided at the sign nodes.
double abs_h_integral(std::int64_t t);

// Kolmogorov distance of {Phi(x_i) mod 2pi} from uniform on a grid of x.
double phase_equidistribution_ks(std::int64_t t, int grid_points = 10000);

struct ResidualReport {
    std::int64_t t = 0;
    double phase_offset = 0.0;  // calibrated additive delta
    std::vector<double> x;
    std::vector<double> residual;  // t p/2 - f (1 + H)
    double rms = 0.0;
};

// RMS of the pointwise residual between the exact walk and the slow/fast
// decomposition on the given grid; requires phi = pi/4 (UnsupportedBias
// otherwise).
ResidualReport decomposition_residual(const WalkParams& params, std::int64_t t,
                                      const std::vector<double>& x_grid);

// Phase offset in {0, pi/2, pi, 3pi/2} minimizing the residual RMS at the
// calibration time; memoized per parameter point.
double calibrate_phase_offset(const WalkParams& params, std::int64_t t_calibrate = 1024);

struct OscillationReport {
    std::int64_t t = 0;
    double abs_h_integral = 0.0;
    double f_weighted_integral = 0.0;      // integral of f |H|
    double bound_half_f_integral = 0.0;    // (1/(2pi)) integral of |H|
    double bound_triangle_sum = 0.0;       // sum |xi_l| (x_{l+1} - x_l) / 4
    double bound_explicit = 0.0;           // 1 / (8 sqrt2 pi)
    double tv_plateau = 0.0;               // TV(walk, sublattice projection)
    std::size_t node_count = 0;
    std::vector<double> nodes;
};

// The nonequivalence functionals at the symmetric point, including the
// directly measured TV plateau against the sublattice discretization.
OscillationReport lower_bound_chain(std::int64_t t);

nlohmann::ordered_json report_to_json(const OscillationReport& r);

}  // namespace walklab
