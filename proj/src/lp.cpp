#include "walklab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "walklab/errors.hpp"

namespace walklab {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau layout: m rows x (ncols + 1); last column is the rhs. Row 0..m-1
// are constraints, objective handled via reduced-cost recomputation against
// the basis (revised-style pricing on a dense tableau).
struct Tableau {
    int m = 0;
    int n = 0;  // structural + slack + artificial columns
    std::vector<double> a;  // (m) x (n + 1), row-major
    std::vector<int> basis;

    double& at(int r, int c) { return a[std::size_t(r) * std::size_t(n + 1) + std::size_t(c)]; }
    double at(int r, int c) const {
        return a[std::size_t(r) * std::size_t(n + 1) + std::size_t(c)];
    }
    double& rhs(int r) { return at(r, n); }
    double rhs(int r) const { return at(r, n); }

    void pivot(int pr, int pc) {
        const double pv = at(pr, pc);
        const double inv = 1.0 / pv;
        for (int c = 0; c <= n; ++c) at(pr, c) *= inv;
        at(pr, pc) = 1.0;
        for (int r = 0; r < m; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (int c = 0; c <= n; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        basis[std::size_t(pr)] = pc;
    }
};

// Price column j against objective coefficients obj over the current basis.
// reduced_j = obj_j - sum_r obj[basis_r] * tableau[r][j].
void reduced_costs(const Tableau& t, const std::vector<double>& obj, std::vector<double>& out) {
    out.assign(std::size_t(t.n), 0.0);
    std::vector<double> cb(std::size_t(t.m));
    for (int r = 0; r < t.m; ++r) cb[std::size_t(r)] = obj[std::size_t(t.basis[std::size_t(r)])];
    for (int j = 0; j < t.n; ++j) {
        double acc = obj[std::size_t(j)];
        for (int r = 0; r < t.m; ++r) {
            const double v = t.at(r, j);
            if (v != 0.0) acc -= cb[std::size_t(r)] * v;
        }
        out[std::size_t(j)] = acc;
    }
}

// Returns iterations used; throws on iteration blowup.
int run_simplex(Tableau& t, const std::vector<double>& obj, int max_iter) {
    std::vector<double> red;
    int stall = 0;
    for (int iter = 0; iter < max_iter; ++iter) {
        reduced_costs(t, obj, red);
        int pc = -1;
        if (stall < 64) {
            double best = -1e-9;
            for (int j = 0; j < t.n; ++j) {
                if (red[std::size_t(j)] < best) {
                    best = red[std::size_t(j)];
                    pc = j;
                }
            }
        } else {  // Bland
            for (int j = 0; j < t.n; ++j) {
                if (red[std::size_t(j)] < -1e-9) {
                    pc = j;
                    break;
                }
            }
        }
        if (pc < 0) return iter;
        int pr = -1;
        double best_ratio = 0.0;
        for (int r = 0; r < t.m; ++r) {
            const double v = t.at(r, pc);
            if (v > kPivotTol) {
                const double ratio = t.rhs(r) / v;
                if (pr < 0 || ratio < best_ratio - 1e-12 ||
                    (std::abs(ratio - best_ratio) <= 1e-12 &&
                     t.basis[std::size_t(r)] < t.basis[std::size_t(pr)])) {
                    pr = r;
                    best_ratio = ratio;
                }
            }
        }
        if (pr < 0) throw ConvergenceError("simplex: unbounded direction");
        if (best_ratio < 1e-12) {
            ++stall;
        } else {
            stall = 0;
        }
        t.pivot(pr, pc);
    }
    throw ConvergenceError("simplex: iteration limit");
}

}  // namespace

LpSolution solve_lp(const LpProblem& p) {
    const int m = int(p.rows.size());
    const int nv = p.num_vars;
    // Columns: [structural | slack/surplus | artificial]
    int n_slack = 0;
    for (int r = 0; r < m; ++r) {
        if (p.relation[std::size_t(r)] != 0) ++n_slack;
    }
    Tableau t;
    t.m = m;
    t.n = nv + n_slack + m;  // one artificial per row (unused ones stay nonbasic)
    t.a.assign(std::size_t(m) * std::size_t(t.n + 1), 0.0);
    t.basis.assign(std::size_t(m), -1);

    int slack_ix = 0;
    std::vector<int> artificial_col(std::size_t(m), -1);
    for (int r = 0; r < m; ++r) {
        double sign = 1.0;
        if (p.b[std::size_t(r)] < 0.0) sign = -1.0;  // keep rhs nonnegative
        for (int j = 0; j < nv; ++j) t.at(r, j) = sign * p.rows[std::size_t(r)][std::size_t(j)];
        t.rhs(r) = sign * p.b[std::size_t(r)];
        const int rel = p.relation[std::size_t(r)] * int(sign);
        if (rel != 0) {
            t.at(r, nv + slack_ix) = (rel > 0) ? -1.0 : 1.0;  // surplus or slack
            ++slack_ix;
        }
        const int acol = nv + n_slack + r;
        t.at(r, acol) = 1.0;
        artificial_col[std::size_t(r)] = acol;
        t.basis[std::size_t(r)] = acol;
    }

    LpSolution sol;
    const int max_iter = 200 * (t.n + t.m) + 10000;

    // Phase 1: minimize sum of artificials.
    std::vector<double> obj1(std::size_t(t.n), 0.0);
    for (int r = 0; r < m; ++r) obj1[std::size_t(artificial_col[std::size_t(r)])] = 1.0;
    sol.iterations += run_simplex(t, obj1, max_iter);
    double phase1 = 0.0;
    for (int r = 0; r < m; ++r) {
        if (t.basis[std::size_t(r)] >= nv + n_slack) phase1 += t.rhs(r);
    }
    if (phase1 > 1e-8) throw ConvergenceError("lp: infeasible");

    // Drive leftover artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
        if (t.basis[std::size_t(r)] < nv + n_slack) continue;
        for (int j = 0; j < nv + n_slack; ++j) {
            if (std::abs(t.at(r, j)) > 1e-9) {
                t.pivot(r, j);
                break;
            }
        }
    }

    // Phase 2: original objective; artificials pinned out by large cost.
    std::vector<double> obj2(std::size_t(t.n), 0.0);
    for (int j = 0; j < nv; ++j) obj2[std::size_t(j)] = p.c[std::size_t(j)];
    for (int r = 0; r < m; ++r) obj2[std::size_t(artificial_col[std::size_t(r)])] = 1e9;
    sol.iterations += run_simplex(t, obj2, max_iter);

    sol.x.assign(std::size_t(nv), 0.0);
    for (int r = 0; r < m; ++r) {
        const int bc = t.basis[std::size_t(r)];
        if (bc < nv) sol.x[std::size_t(bc)] = t.rhs(r);
    }
    sol.objective = 0.0;
    for (int j = 0; j < nv; ++j) sol.objective += p.c[std::size_t(j)] * sol.x[std::size_t(j)];

    // Dual y = c_B B^{-1}: the artificial columns hold B^{-1} in the final
    // tableau. Basic leftover artificials sit at level 0 and carry true cost
    // 0, so they are priced at 0 here (the 1e9 was only an anti-entry pin).
    std::vector<double> cb(std::size_t(m), 0.0);
    for (int r = 0; r < m; ++r) {
        const int bc = t.basis[std::size_t(r)];
        cb[std::size_t(r)] = (bc < nv) ? p.c[std::size_t(bc)] : 0.0;
    }
    sol.dual.assign(std::size_t(m), 0.0);
    for (int r = 0; r < m; ++r) {
        const int acol = artificial_col[std::size_t(r)];
        double y = 0.0;
        for (int row = 0; row < m; ++row) y += cb[std::size_t(row)] * t.at(row, acol);
        if (p.b[std::size_t(r)] < 0.0) y = -y;  // undo the row sign flip
        sol.dual[std::size_t(r)] = y;
    }
    double by = 0.0;
    for (int r = 0; r < m; ++r) by += sol.dual[std::size_t(r)] * p.b[std::size_t(r)];
    sol.duality_gap = std::abs(sol.objective - by);
    // Dual feasibility: c_j - y'A_j >= 0 for all structural columns; equality
    // rows have free multipliers, >= rows need y >= 0, <= rows y <= 0.
    double infeas = 0.0;
    for (int j = 0; j < nv; ++j) {
        double slack = p.c[std::size_t(j)];
        for (int r = 0; r < m; ++r) slack -= sol.dual[std::size_t(r)] * p.rows[std::size_t(r)][std::size_t(j)];
        infeas = std::max(infeas, -slack);
    }
    for (int r = 0; r < m; ++r) {
        if (p.relation[std::size_t(r)] > 0) infeas = std::max(infeas, -sol.dual[std::size_t(r)]);
        if (p.relation[std::size_t(r)] < 0) infeas = std::max(infeas, sol.dual[std::size_t(r)]);
    }
    sol.dual_infeasibility = infeas;
    sol.optimal = true;
    return sol;
}

}  // namespace walklab
