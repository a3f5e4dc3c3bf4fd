#pragma once

#include <cstdint>
#include <vector>

#include "walklab/params.hpp"

namespace walklab {

inline constexpr std::int64_t kMaxWalkSteps = std::int64_t(1) << 20;

// Amplitudes at time t live on the parity sublattice k = -t, -t+2, ..., t.
// Packed index i <-> site k = 2i - t; four flat arrays keep the coin-0 and
// coin-1 components split into real/imaginary parts for the kernels.
struct WalkState {
    std::int64_t t = 0;
    std::vector<double> br, bi;  // coin-0 amplitude
    std::vector<double> Br, Bi;  // coin-1 amplitude

    std::int64_t site(std::int64_t packed) const { return 2 * packed - t; }
    std::size_t size() const { return br.size(); }
    double norm() const;  // sum of |amplitude|^2
};

// Probability function over consecutive integer sites [offset, offset+n).
struct LatticeDist {
    std::int64_t t = 0;
    std::int64_t offset = 0;
    std::vector<double> probs;

    double prob(std::int64_t site) const {
        const std::int64_t j = site - offset;
        return (j >= 0 && j < std::int64_t(probs.size())) ? probs[std::size_t(j)] : 0.0;
    }
    double total_mass() const;
    double mean() const;           // sum k p(k)
    double second_moment() const;  // sum k^2 p(k)
};

struct RandomizedDist {
    std::int64_t t = 0;
    double eta = 0.0;
    std::int64_t r = 0;  // floor(eta * t)
    std::int64_t offset = 0;
    std::vector<double> probs;

    double prob(std::int64_t site) const {
        const std::int64_t j = site - offset;
        return (j >= 0 && j < std::int64_t(probs.size())) ? probs[std::size_t(j)] : 0.0;
    }
    double total_mass() const;
};

// Piecewise-constant density on [lo, hi) with uniform cells.
struct DensityGrid {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> pdf;

    int cells() const { return int(pdf.size()); }
    double cell_width() const { return (hi - lo) / double(pdf.size()); }
    double integral() const;
};

struct GridSpec {
    double lo = -1.2;
    double hi = 1.2;
    int cells = 4096;
};

WalkState init_state(const WalkParams& params);

// One coin+shift step; norm is asserted, never corrected.
WalkState step(const WalkState& state, const WalkParams& params);

// Exact distribution after t steps; probabilities reported on the full
// lattice [-t, t] with explicit zeros at forbidden-parity sites.
LatticeDist evolve(const WalkParams& params, std::int64_t t);

LatticeDist distribution(const WalkState& state);

// Window average over 2r consecutive sites, r = floor(eta * t); the window
// for output site y covers input sites [y - r, y + r - 1]. Returns the input
// unchanged (r = 0) when floor(eta * t) < 1.
RandomizedDist randomize(const LatticeDist& dist, double eta);

// Density of the scaled walk convolved with uniform(-eta, eta], cell-averaged
// onto the grid. The grid must cover [-1, 1] with cells no wider than eta/4.
DensityGrid smooth_pdf(const LatticeDist& dist, double eta, const GridSpec& grid);

// CDF of the smoothed scaled walk at x (exact piecewise-linear form).
double smoothed_cdf(const LatticeDist& dist, double eta, double x);

}  // namespace walklab
