#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "walklab/limitlaw.hpp"
#include "walklab/params.hpp"

namespace walklab {

enum class Integrator { euler, splitting };

struct LangevinConfig {
    double epsilon = 0.05;
    WalkParams params;
    double h = 0.01;             // step size, in (0, 0.1]
    std::int64_t burn_in = 0;    // discarded steps per chain
    std::int64_t retained = 0;   // recorded samples per chain
    std::int64_t thin = 1;       // steps between recorded samples
    int chains = 1;
    std::uint64_t seed = 0;
    Integrator integrator = Integrator::splitting;
    // 0: start uniform on the plateau (the only bounded-density region);
    // > 0: overdispersed start y ~ N(0, sigma^2). v always starts N(0, 1).
    double start_sigma = 0.0;
};

struct Ensemble {
    std::vector<double> y, v;  // chain-major: chain c occupies [c*per_chain, ...)
    int chains = 0;
    std::int64_t per_chain = 0;
    double time_elapsed = 0.0;
    std::uint64_t fingerprint = 0;
    LangevinConfig config;
};

// Gradient of the regularized potential -log pi_eps: zero on the plateau
// |y| < -log(1-eps), the closed-form bracket elsewhere. drift_sign carries
// the resolved shift convention of the underlying law.
double grad_psi_eps(double y, double epsilon, const DerivedCoefficients& coeffs,
                    int drift_sign = +1);

// Splitting integrator: half kick, half drift, exact friction-noise update
// (friction 1, diffusion sqrt2 give unit stationary velocity variance), half
// drift, half kick. Euler-Maruyama available as baseline. Chains run on
// independent counter-based streams keyed by (seed, chain).
Ensemble integrate_underdamped(const LangevinConfig& config, int threads = 1);

// Position-only dynamics dY = -grad Psi_eps dt + sqrt2 dB, Euler-Maruyama;
// same invariant marginal in Y.
Ensemble integrate_overdamped(const LangevinConfig& config, int threads = 1);

// Deterministic kick-drift-drift-kick core (no friction, no noise); test hook
// for the splitting order check.
void verlet_step(double& y, double& v, double h, double grad_at_y, double& grad_out,
                 const RegularizedLaw& law);

// x = t |u11| e^{-|y|} sign(y) pointwise; sign(0) := +1.
std::vector<double> observable_xc(const Ensemble& ensemble, std::int64_t t,
                                  const WalkParams& params);

struct StationarityDiagnostics {
    double tv_y = 0.0;    // TV(Y histogram, pi_eps) on 128 bins
    double v_mean = 0.0;
    double v_var = 0.0;
    double yv_corr = 0.0;
    double tv_xc = 0.0;   // TV(Xc/t histogram, regularized limit law)
    int bins = 128;
    double y_lo = 0.0, y_hi = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
};

StationarityDiagnostics diagnose(const Ensemble& ensemble, const RegularizedLaw& law);

// TV between the chain snapshot histogram and pi_eps, on the same fixed bins
// as diagnose().
struct ConvergenceCurve {
    std::vector<std::pair<std::int64_t, double>> tv_by_step;
    std::int64_t steps_to_threshold = -1;  // -1: never crossed within budget
};

enum class Dynamics { underdamped, overdamped };

ConvergenceCurve time_to_tv(const LangevinConfig& config, Dynamics dynamics, double threshold,
                            std::int64_t check_every, std::int64_t max_steps, int threads = 1);

}  // namespace walklab
