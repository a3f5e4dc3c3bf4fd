#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "walklab/params.hpp"
#include "walklab/walk.hpp"

namespace walklab {

struct TransformSpec {
    double abs_u11 = 0.0;
};

// x = |u11| e^{-|y|} sign(y); strictly monotone decreasing in |y| per side.
double transform_forward(double y, const TransformSpec& spec);
// y = sign(x) log(|u11| / |x|), defined for 0 < |x| < |u11|.
double transform_inverse(double x, const TransformSpec& spec);

// Tabulated CDF of the limit law in the substituted variable x = |u11| sin u;
// the substitution removes the inverse-square-root endpoint singularities.
class CdfTable {
  public:
    CdfTable(double abs_u11, double drift_term);  // drift_term = sign * bracket coeff

    double cdf(double x) const;
    double invert(double v) const;  // v in [0, 1]
    double abs_u11() const { return a_; }
    std::uint64_t checksum() const { return checksum_; }

  private:
    double a_;
    double drift_;
    std::vector<double> c_;  // cumulative mass at uniform u-knots
    std::uint64_t checksum_ = 0;
};

// Weak limit law of the scaled walk, supported on (-|u11|, |u11|).
struct KonnoLaw {
    WalkParams params;
    DerivedCoefficients coeffs;
    double drift_coeff = 0.0;        // bracketed coefficient of the density
    int drift_sign = +1;             // resolved shift-convention switch
    double resolution_mean = 0.0;    // exact walk mean used to fix the sign
    std::shared_ptr<const CdfTable> table;
};

// Builds the law and resolves drift_sign by comparing the density's mean
// against the exact walk mean at t = 2000 (skipped when the drift vanishes).
KonnoLaw make_konno_law(const WalkParams& params);

// Density of the limit law; 0 outside the open support, +inf exactly at the
// endpoints.
double konno_pdf(double x, const KonnoLaw& law);

// Transformed density on the real line (y != 0).
double pi_pdf(double y, const KonnoLaw& law);

double konno_cdf(double x, const KonnoLaw& law);

// Plateau constants of the regularization. The x-form constant balances mass
// over the endcap width 2 eps |u11|; the y-form constant balances mass over
// the window width -2 log(1-eps). Both divide the same tail mass; they differ
// by a factor ~|u11| and each normalizes its own representation.
double kappa_eps_x(double epsilon, const KonnoLaw& law);
double kappa_eps_y(double epsilon, const KonnoLaw& law);
inline double kappa_eps(double epsilon, const KonnoLaw& law) { return kappa_eps_x(epsilon, law); }

// Tail mass outside |x| <= |u11| (1 - eps), the shared numerator of both
// plateau constants; dual quadrature routes (x-form and y-form) agree to
// 1e-10 and the y-route is exposed for that check.
double regularization_tail_mass(double epsilon, const KonnoLaw& law);
double regularization_tail_mass_y(double epsilon, const KonnoLaw& law);

struct RegularizedLaw {
    KonnoLaw base;
    double epsilon = 0.0;
    double kappa_x = 0.0;     // plateau height, x-form
    double kappa_y = 0.0;     // plateau height, y-form
    double tail_mass = 0.0;   // mass moved onto the plateau
    double x_inner = 0.0;     // |u11| (1 - eps)
    double y_plateau = 0.0;   // -log(1 - eps)
};

RegularizedLaw regularize(const KonnoLaw& law, double epsilon);

double f_eps_pdf(double x, const RegularizedLaw& law);
double pi_eps_pdf(double y, const RegularizedLaw& law);
double f_eps_cdf(double x, const RegularizedLaw& law);
double pi_eps_cdf(double y, const RegularizedLaw& law);
double f_eps_quantile(double p, const RegularizedLaw& law);
double pi_eps_quantile(double p, const RegularizedLaw& law);

enum class ParityMode { full, sublattice };

// Discretization onto the 1/t lattice: full mode uses cells of width 1/t
// centered at every k/t; sublattice mode uses cells of width 2/t centered on
// the parity-allowed sites (k + t even), matching where the walk carries mass.
LatticeDist lattice_projection(const KonnoLaw& law, std::int64_t t, ParityMode mode);
LatticeDist lattice_projection(const RegularizedLaw& law, std::int64_t t, ParityMode mode);

std::vector<double> sample(const KonnoLaw& law, std::size_t n, std::uint64_t seed);
std::vector<double> sample(const RegularizedLaw& law, std::size_t n, std::uint64_t seed);

double moment(const KonnoLaw& law, int order);
double moment(const RegularizedLaw& law, int order);
double absolute_moment(const KonnoLaw& law, int order);

}  // namespace walklab
