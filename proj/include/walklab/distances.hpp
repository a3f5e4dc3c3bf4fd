#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "walklab/walk.hpp"

namespace walklab {

// Finite-support distribution over integer labels (sites or bin indices).
// Labels are strictly increasing; distances require aligned labels.
struct FiniteDist {
    std::vector<std::int64_t> labels;
    std::vector<double> probs;

    double total_mass() const;
};

FiniteDist from_lattice(const LatticeDist& d);
FiniteDist from_randomized(const RandomizedDist& d);

// Pads both distributions onto the union of their supports.
std::pair<FiniteDist, FiniteDist> align(const FiniteDist& p, const FiniteDist& q);

// Half-L1 on a common support.
double tv(const FiniteDist& p, const FiniteDist& q);

double hellinger(const FiniteDist& p, const FiniteDist& q);

struct BoundCheck {
    double tv_sq = 0.0;
    double hellinger_sq = 0.0;
    double mass_outside = 0.0;  // p(A^c)
    double log_term = 0.0;      // E_p[1_A log dp/dq]
    double rhs = 0.0;           // 2 p(A^c) + log term
    bool chain_holds = false;   // tv^2 <= H^2 <= rhs
};

// Verifies tv^2 <= H^2 <= 2 p(A^c) + E_p[1_A log dp/dq] for the label set A.
BoundCheck bound_check(const FiniteDist& p, const FiniteDist& q,
                       const std::vector<std::int64_t>& A);

// Row-stochastic kernel with sparse rows; rows index the input support,
// columns the output support.
struct StochasticKernel {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<std::int64_t> in_labels;
    std::vector<std::int64_t> out_labels;
    std::vector<std::vector<std::pair<std::int64_t, double>>> entries;  // per row: (col, value)

    double row_sum(std::int64_t r) const;
    double entry(std::int64_t r, std::int64_t c) const;
    std::vector<double> to_dense() const;  // row-major rows x cols
    FiniteDist apply(const FiniteDist& p) const;
};

// Subcell grid labels: cell k of the 1/t lattice splits into `subcells`
// columns labeled k*subcells + s, covering
// (k/t - 1/(2t) + s/(subcells t), ... + (s+1)/(subcells t)].
//
// Width-1/t uniform smear of each site's mass over its own cell, expressed
// on the subcell grid; discretizing it back recovers the input exactly. eta
// is carried as provenance only (the smear acts on the already-randomized
// law, whose window it does not re-apply).
StochasticKernel uniform_convolution_kernel(std::int64_t t, double eta,
                                            const std::vector<std::int64_t>& site_labels,
                                            int subcells = 4);

// Aggregates the subcell grid back onto the 1/t lattice.
StochasticKernel discretization_kernel(std::int64_t t, int subcells, std::int64_t site_lo,
                                       std::int64_t site_hi);

// Site-to-site window average: row k uniform over [k - r + 1, k + r].
StochasticKernel randomization_kernel(std::int64_t site_lo, std::int64_t site_hi, std::int64_t r);

// Exact masses of a continuous law (given by its CDF on the x = site/t
// scale) on the subcell grid between the given sites.
FiniteDist project_cdf_to_subcells(const std::function<double(double)>& cdf, std::int64_t t,
                                   int subcells, std::int64_t site_lo, std::int64_t site_hi);

// tv(q, K(p)): an upper bound on the one-sided deficiency for this kernel.
double deficiency_upper(const FiniteDist& p, const FiniteDist& q, const StochasticKernel& k);

struct DeficiencyLpResult {
    double value = 0.0;
    std::vector<double> kernel;  // row-major, p-support x q-support
    double duality_gap = 0.0;
    int iterations = 0;
};

// Exact minimization of tv(q, K(p)) over row-stochastic K as a linear
// program; supports capped at size_cap per side.
DeficiencyLpResult deficiency_lp(const FiniteDist& p, const FiniteDist& q, int size_cap = 64);

// Half-L1 between piecewise-constant density grids on identical cells.
double tv_grid(const DensityGrid& a, const DensityGrid& b);

// Half-L1 between a density grid and a continuous law given by its CDF;
// counts the law's mass outside the grid.
double tv_grid_vs_cdf(const DensityGrid& g, const std::function<double(double)>& cdf);

}  // namespace walklab
