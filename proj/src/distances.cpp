#include "walklab/distances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "walklab/errors.hpp"
#include "walklab/lp.hpp"

namespace walklab {

double FiniteDist::total_mass() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

FiniteDist from_lattice(const LatticeDist& d) {
    FiniteDist out;
    out.labels.resize(d.probs.size());
    out.probs = d.probs;
    for (std::size_t j = 0; j < d.probs.size(); ++j) out.labels[j] = d.offset + std::int64_t(j);
    return out;
}

FiniteDist from_randomized(const RandomizedDist& d) {
    FiniteDist out;
    out.labels.resize(d.probs.size());
    out.probs = d.probs;
    for (std::size_t j = 0; j < d.probs.size(); ++j) out.labels[j] = d.offset + std::int64_t(j);
    return out;
}

std::pair<FiniteDist, FiniteDist> align(const FiniteDist& p, const FiniteDist& q) {
    std::set<std::int64_t> labels(p.labels.begin(), p.labels.end());
    labels.insert(q.labels.begin(), q.labels.end());
    FiniteDist pa, qa;
    pa.labels.assign(labels.begin(), labels.end());
    qa.labels = pa.labels;
    pa.probs.assign(pa.labels.size(), 0.0);
    qa.probs.assign(qa.labels.size(), 0.0);
    std::map<std::int64_t, std::size_t> index;
    for (std::size_t i = 0; i < pa.labels.size(); ++i) index[pa.labels[i]] = i;
    for (std::size_t i = 0; i < p.labels.size(); ++i) pa.probs[index[p.labels[i]]] += p.probs[i];
    for (std::size_t i = 0; i < q.labels.size(); ++i) qa.probs[index[q.labels[i]]] += q.probs[i];
    return {pa, qa};
}

namespace {

void require_aligned(const FiniteDist& p, const FiniteDist& q) {
    if (p.labels != q.labels) {
        throw SupportMismatch("distributions must share an aligned support");
    }
}

}  // namespace

double tv(const FiniteDist& p, const FiniteDist& q) {
    require_aligned(p, q);
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) l1 += std::abs(p.probs[i] - q.probs[i]);
    return 0.5 * l1;
}

double hellinger(const FiniteDist& p, const FiniteDist& q) {
    require_aligned(p, q);
    double h2 = 0.0;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        const double d = std::sqrt(p.probs[i]) - std::sqrt(q.probs[i]);
        h2 += d * d;
    }
    return std::sqrt(h2);
}

BoundCheck bound_check(const FiniteDist& p, const FiniteDist& q,
                       const std::vector<std::int64_t>& A) {
    require_aligned(p, q);
    const std::set<std::int64_t> inA(A.begin(), A.end());
    BoundCheck out;
    const double tvv = tv(p, q);
    out.tv_sq = tvv * tvv;
    const double h = hellinger(p, q);
    out.hellinger_sq = h * h;
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
        const double pi = p.probs[i];
        if (inA.count(p.labels[i])) {
            if (pi > 0.0) {
                if (q.probs[i] <= 0.0) {
                    throw DivergentLog("bound_check: q vanishes on A where p does not");
                }
                out.log_term += pi * std::log(pi / q.probs[i]);
            }
        } else {
            out.mass_outside += pi;
        }
    }
    out.rhs = 2.0 * out.mass_outside + out.log_term;
    out.chain_holds = out.tv_sq <= out.hellinger_sq + 1e-12 &&
                      out.hellinger_sq <= out.rhs + 1e-12;
    return out;
}

double StochasticKernel::row_sum(std::int64_t r) const {
    double s = 0.0;
    for (const auto& [c, v] : entries[std::size_t(r)]) s += v;
    return s;
}

double StochasticKernel::entry(std::int64_t r, std::int64_t c) const {
    for (const auto& [cc, v] : entries[std::size_t(r)]) {
        if (cc == c) return v;
    }
    return 0.0;
}

std::vector<double> StochasticKernel::to_dense() const {
    std::vector<double> dense(std::size_t(rows) * std::size_t(cols), 0.0);
    for (std::int64_t r = 0; r < rows; ++r) {
        for (const auto& [c, v] : entries[std::size_t(r)]) {
            dense[std::size_t(r) * std::size_t(cols) + std::size_t(c)] += v;
        }
    }
    return dense;
}

FiniteDist StochasticKernel::apply(const FiniteDist& p) const {
    if (p.labels != in_labels) {
        throw SupportMismatch("kernel input support does not match distribution");
    }
    FiniteDist out;
    out.labels = out_labels;
    out.probs.assign(out_labels.size(), 0.0);
    for (std::int64_t r = 0; r < rows; ++r) {
        const double pr = p.probs[std::size_t(r)];
        if (pr == 0.0) continue;
        for (const auto& [c, v] : entries[std::size_t(r)]) out.probs[std::size_t(c)] += pr * v;
    }
    return out;
}

StochasticKernel uniform_convolution_kernel(std::int64_t t, double eta,
                                            const std::vector<std::int64_t>& site_labels,
                                            int subcells) {
    (void)t;
    (void)eta;
    if (subcells < 1) throw RangeError("subcells must be >= 1");
    StochasticKernel k;
    k.rows = std::int64_t(site_labels.size());
    k.in_labels = site_labels;
    const std::int64_t lo = site_labels.front();
    const std::int64_t hi = site_labels.back();
    k.cols = (hi - lo + 1) * subcells;
    k.out_labels.resize(std::size_t(k.cols));
    for (std::int64_t c = 0; c < k.cols; ++c) k.out_labels[std::size_t(c)] = lo * subcells + c;
    k.entries.resize(std::size_t(k.rows));
    const double w = 1.0 / double(subcells);
    for (std::int64_t r = 0; r < k.rows; ++r) {
        const std::int64_t site = site_labels[std::size_t(r)];
        for (int s = 0; s < subcells; ++s) {
            const std::int64_t col = (site - lo) * subcells + s;
            k.entries[std::size_t(r)].emplace_back(col, w);
        }
    }
    return k;
}

StochasticKernel discretization_kernel(std::int64_t t, int subcells, std::int64_t site_lo,
                                       std::int64_t site_hi) {
    (void)t;
    if (subcells < 1) throw RangeError("subcells must be >= 1");
    StochasticKernel k;
    const std::int64_t sites = site_hi - site_lo + 1;
    k.rows = sites * subcells;
    k.cols = sites;
    k.in_labels.resize(std::size_t(k.rows));
    for (std::int64_t r = 0; r < k.rows; ++r) k.in_labels[std::size_t(r)] = site_lo * subcells + r;
    k.out_labels.resize(std::size_t(sites));
    for (std::int64_t c = 0; c < sites; ++c) k.out_labels[std::size_t(c)] = site_lo + c;
    k.entries.resize(std::size_t(k.rows));
    for (std::int64_t r = 0; r < k.rows; ++r) {
        k.entries[std::size_t(r)].emplace_back(r / subcells, 1.0);
    }
    return k;
}

StochasticKernel randomization_kernel(std::int64_t site_lo, std::int64_t site_hi,
                                      std::int64_t r) {
    if (r < 1) throw RangeError("randomization_kernel: r must be >= 1");
    StochasticKernel k;
    const std::int64_t sites = site_hi - site_lo + 1;
    k.rows = sites;
    k.cols = sites + 2 * r - 1;
    k.in_labels.resize(std::size_t(sites));
    for (std::int64_t i = 0; i < sites; ++i) k.in_labels[std::size_t(i)] = site_lo + i;
    k.out_labels.resize(std::size_t(k.cols));
    for (std::int64_t c = 0; c < k.cols; ++c) k.out_labels[std::size_t(c)] = site_lo - r + 1 + c;
    k.entries.resize(std::size_t(sites));
    const double w = 1.0 / double(2 * r);
    for (std::int64_t i = 0; i < sites; ++i) {
        for (std::int64_t j = -r + 1; j <= r; ++j) {
            const std::int64_t col = (site_lo + i + j) - (site_lo - r + 1);
            k.entries[std::size_t(i)].emplace_back(col, w);
        }
    }
    return k;
}

FiniteDist project_cdf_to_subcells(const std::function<double(double)>& cdf, std::int64_t t,
                                   int subcells, std::int64_t site_lo, std::int64_t site_hi) {
    FiniteDist out;
    const std::int64_t n = (site_hi - site_lo + 1) * subcells;
    out.labels.resize(std::size_t(n));
    out.probs.resize(std::size_t(n));
    const double td = double(t);
    double prev = cdf((double(site_lo) - 0.5) / td);
    for (std::int64_t i = 0; i < n; ++i) {
        out.labels[std::size_t(i)] = site_lo * subcells + i;
        const double edge =
            (double(site_lo) - 0.5 + double(i + 1) / double(subcells)) / td;
        const double next = cdf(edge);
        out.probs[std::size_t(i)] = next - prev;
        prev = next;
    }
    return out;
}

double deficiency_upper(const FiniteDist& p, const FiniteDist& q, const StochasticKernel& k) {
    const FiniteDist mapped = k.apply(p);
    if (mapped.labels == q.labels) return tv(mapped, q);
    auto [ma, qa] = align(mapped, q);
    return tv(ma, qa);
}

DeficiencyLpResult deficiency_lp(const FiniteDist& p, const FiniteDist& q, int size_cap) {
    const int m = int(p.labels.size());
    const int n = int(q.labels.size());
    if (m > size_cap || n > size_cap) {
        throw SizeCap("deficiency_lp: support exceeds the size cap");
    }
    // Variables: K[i][j] (m*n, row-major), then s[j] (n).
    // minimize (1/2) sum_j s_j
    //   s_j + sum_i p_i K_ij >= q_j
    //   s_j - sum_i p_i K_ij >= -q_j
    //   sum_j K_ij = 1 for all i
    LpProblem lp;
    lp.num_vars = m * n + n;
    lp.c.assign(std::size_t(lp.num_vars), 0.0);
    for (int j = 0; j < n; ++j) lp.c[std::size_t(m * n + j)] = 0.5;
    const int rows = 2 * n + m;
    lp.rows.assign(std::size_t(rows), std::vector<double>(std::size_t(lp.num_vars), 0.0));
    lp.b.assign(std::size_t(rows), 0.0);
    lp.relation.assign(std::size_t(rows), 0);
    for (int j = 0; j < n; ++j) {
        auto& pos = lp.rows[std::size_t(j)];
        auto& neg = lp.rows[std::size_t(n + j)];
        for (int i = 0; i < m; ++i) {
            pos[std::size_t(i * n + j)] = p.probs[std::size_t(i)];
            neg[std::size_t(i * n + j)] = -p.probs[std::size_t(i)];
        }
        pos[std::size_t(m * n + j)] = 1.0;
        neg[std::size_t(m * n + j)] = 1.0;
        lp.b[std::size_t(j)] = q.probs[std::size_t(j)];
        lp.b[std::size_t(n + j)] = -q.probs[std::size_t(j)];
        lp.relation[std::size_t(j)] = +1;
        lp.relation[std::size_t(n + j)] = +1;
    }
    for (int i = 0; i < m; ++i) {
        auto& row = lp.rows[std::size_t(2 * n + i)];
        for (int j = 0; j < n; ++j) row[std::size_t(i * n + j)] = 1.0;
        lp.b[std::size_t(2 * n + i)] = 1.0;
        lp.relation[std::size_t(2 * n + i)] = 0;
    }
    const LpSolution sol = solve_lp(lp);
    DeficiencyLpResult out;
    out.value = sol.objective;
    out.kernel.assign(std::size_t(m) * std::size_t(n), 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            out.kernel[std::size_t(i * n + j)] = sol.x[std::size_t(i * n + j)];
        }
    }
    out.duality_gap = std::max(sol.duality_gap, sol.dual_infeasibility);
    out.iterations = sol.iterations;
    return out;
}

double tv_grid(const DensityGrid& a, const DensityGrid& b) {
    if (a.lo != b.lo || a.hi != b.hi || a.pdf.size() != b.pdf.size()) {
        throw SupportMismatch("tv_grid: grids must match");
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i < a.pdf.size(); ++i) l1 += std::abs(a.pdf[i] - b.pdf[i]);
    return 0.5 * l1 * a.cell_width();
}

double tv_grid_vs_cdf(const DensityGrid& g, const std::function<double(double)>& cdf) {
    const double width = g.cell_width();
    double l1 = 0.0;
    double prev = cdf(g.lo);
    for (int c = 0; c < g.cells(); ++c) {
        const double next = cdf(g.lo + width * double(c + 1));
        l1 += std::abs(g.pdf[std::size_t(c)] * width - (next - prev));
        prev = next;
    }
    const double outside = cdf(g.lo) + (1.0 - prev);
    return 0.5 * (l1 + outside);
}

}  // namespace walklab
