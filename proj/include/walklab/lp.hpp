#pragma once

#include <vector>

namespace walklab {

// Dense LP in the form: minimize c'x subject to A x (=, >=, <=) b, x >= 0.
struct LpProblem {
    int num_vars = 0;
    std::vector<double> c;
    std::vector<std::vector<double>> rows;
    std::vector<double> b;
    std::vector<int> relation;  // 0: ==, +1: >=, -1: <=
};

struct LpSolution {
    bool optimal = false;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> dual;   // one multiplier per constraint row
    double duality_gap = 0.0;   // |c'x - b'y| with y dual-feasible
    double dual_infeasibility = 0.0;
    int iterations = 0;
};

// Two-phase dense tableau simplex with Bland's rule fallback.
LpSolution solve_lp(const LpProblem& problem);

}  // namespace walklab
