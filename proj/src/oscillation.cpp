#include "walklab/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "walklab/errors.hpp"
#include "walklab/limitlaw.hpp"
#include "walklab/quadrature.hpp"
#include "walklab/walk.hpp"

namespace walklab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSupport = 0.70710678118654752440;  // 1/sqrt2

// Nodes are resolved only up to |x| <= 1/sqrt2 - kEdgeMargin. Closer to the
// endpoints the phase slope grows like t / sqrt(L - x) and half an ulp of x
// already moves the phase by more than 1e-9, so roots there cannot be pinned
// in double precision. The excluded slivers contribute < 1e-4 to every
// reported functional.
constexpr double kEdgeMargin = 4e-5;

void require_in_support(double x) {
    if (!(std::abs(x) < kSupport)) {
        throw DomainError("oscillation: |x| must be < 1/sqrt2");
    }
}

void require_unbiased(const WalkParams& p) {
    if (std::abs(p.angles.phi - kPi / 4) > 1e-9) {
        throw UnsupportedBias("oscillation analysis implemented for the phi = pi/4 family only");
    }
}

double alpha_of(double x) {
    return std::acos(std::clamp(x / std::sqrt(1.0 - x * x), -1.0, 1.0));
}

double beta_of(double x) {
    return std::acos(std::clamp((2.0 * x - 1.0) / (kSqrt2 * (1.0 - x)), -1.0, 1.0));
}

double alpha_prime(double x) { return -1.0 / ((1.0 - x * x) * std::sqrt(1.0 - 2.0 * x * x)); }

double beta_prime(double x) { return -1.0 / ((1.0 - x) * std::sqrt(1.0 - 2.0 * x * x)); }

// psi(x) = omega_{alpha_x} + x alpha_x; psi' = alpha + 2 x alpha' after the
// omega chain rule collapses (d omega / d alpha = x at alpha_x).
double psi_prime(double x) { return alpha_of(x) + 2.0 * x * alpha_prime(x); }

}  // namespace

PhasePoint phase_point(double x) {
    require_in_support(x);
    PhasePoint p;
    p.x = x;
    p.alpha = alpha_of(x);
    p.beta = beta_of(x);
    p.omega = std::asin(std::sin(p.alpha) / kSqrt2);
    return p;
}

double oscillation_phase(double x, std::int64_t t) {
    const PhasePoint p = phase_point(x);
    return 2.0 * (p.omega + x * p.alpha) * double(t) - p.beta;
}

double oscillation_phase_derivative(double x, std::int64_t t) {
    require_in_support(x);
    return 2.0 * double(t) * psi_prime(x) - beta_prime(x);
}

double h_oscillation(double x, std::int64_t t, double delta) {
    return kSqrt2 * x * std::sin(oscillation_phase(x, t) + delta);
}

namespace {

std::vector<double> phase_critical_points(std::int64_t t) {
    const double lo = -kSupport + kEdgeMargin;
    const double hi = kSupport - kEdgeMargin;
    const int samples = 8192;
    std::vector<double> roots;
    double xp = lo;
    double fp = oscillation_phase_derivative(xp, t);
    for (int i = 1; i <= samples; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(samples);
        const double f = oscillation_phase_derivative(x, t);
        if ((fp > 0.0) != (f > 0.0)) {
            roots.push_back(find_root(
                [&](double v) { return oscillation_phase_derivative(v, t); }, xp, x, 1e-14));
        }
        xp = x;
        fp = f;
    }
    return roots;
}

double polish_node(double x, double target, std::int64_t t, double lo, double hi) {
    for (int i = 0; i < 3; ++i) {
        const double dphi = oscillation_phase_derivative(x, t);
        if (dphi == 0.0 || !std::isfinite(dphi)) break;
        const double next = x - (oscillation_phase(x, t) - target) / dphi;
        if (!(next > lo && next < hi)) break;
        x = next;
    }
    return x;
}

}  // namespace

NodeSet oscillation_nodes(std::int64_t t) {
    if (t < 1) throw RangeError("oscillation_nodes: t must be >= 1");
    const double lo = -kSupport + kEdgeMargin;
    const double hi = kSupport - kEdgeMargin;
    std::vector<double> pieces = {lo};
    for (double c : phase_critical_points(t)) pieces.push_back(c);
    pieces.push_back(hi);

    NodeSet out;
    for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
        const double a = pieces[p], b = pieces[p + 1];
        const double pa = oscillation_phase(a, t), pb = oscillation_phase(b, t);
        const bool increasing = pb > pa;
        const double lo_phase = std::min(pa, pb), hi_phase = std::max(pa, pb);
        const std::int64_t l_lo = std::int64_t(std::ceil(lo_phase / kPi + 1e-9));
        const std::int64_t l_hi = std::int64_t(std::floor(hi_phase / kPi - 1e-9));
        double left = a;
        for (std::int64_t i = 0; i <= l_hi - l_lo; ++i) {
            const std::int64_t l = increasing ? l_lo + i : l_hi - i;
            const double target = kPi * double(l);
            double x = find_root(
                [&](double v) { return oscillation_phase(v, t) - target; }, left, b, 1e-13);
            x = polish_node(x, target, t, a, b);
            out.nodes.push_back(x);
            left = x;
        }
    }
    std::sort(out.nodes.begin(), out.nodes.end());

    // One quarter-period point per gap; a gap that spans a phase extremum
    // (both edges at the same level) uses the extremum location instead.
    out.midphase.reserve(out.nodes.size() > 0 ? out.nodes.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < out.nodes.size(); ++i) {
        const double xa = out.nodes[i], xb = out.nodes[i + 1];
        const double pa = oscillation_phase(xa, t), pb = oscillation_phase(xb, t);
        if (std::abs(pb - pa) > kPi / 2) {
            const double target = 0.5 * (pa + pb);
            out.midphase.push_back(find_root(
                [&](double v) { return oscillation_phase(v, t) - target; }, xa, xb, 1e-13));
        } else {
            double best = 0.5 * (xa + xb);
            double fb0 = oscillation_phase_derivative(xa, t);
            double x0 = xa;
            const int m = 32;
            for (int j = 1; j <= m; ++j) {
                const double x1 = xa + (xb - xa) * double(j) / double(m);
                const double fb1 = oscillation_phase_derivative(x1, t);
                if ((fb0 > 0.0) != (fb1 > 0.0)) {
                    best = find_root(
                        [&](double v) { return oscillation_phase_derivative(v, t); }, x0, x1,
                        1e-14);
                    break;
                }
                x0 = x1;
                fb0 = fb1;
            }
            out.midphase.push_back(best);
        }
    }
    return out;
}

double abs_h_integral(std::int64_t t) {
    if (t < 1) throw RangeError("abs_h_integral: t must be >= 1");
    const NodeSet ns = oscillation_nodes(t);
    std::vector<double> edges = {-kSupport + kEdgeMargin};
    edges.insert(edges.end(), ns.nodes.begin(), ns.nodes.end());
    edges.push_back(kSupport - kEdgeMargin);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double r, e;
        detail::gk15([&](double x) { return std::abs(h_oscillation(x, t)); }, edges[i],
                     edges[i + 1], r, e);
        total += r;
    }
    return total;
}

double phase_equidistribution_ks(std::int64_t t, int grid_points) {
    const double lo = -kSupport + 1e-6;
    const double hi = kSupport - 1e-6;
    std::vector<double> residues(static_cast<std::size_t>(grid_points));
    const double two_pi = 2.0 * kPi;
    for (int i = 0; i < grid_points; ++i) {
        const double x = lo + (hi - lo) * (double(i) + 0.5) / double(grid_points);
        double r = std::fmod(oscillation_phase(x, t), two_pi);
        if (r < 0.0) r += two_pi;
        residues[std::size_t(i)] = r / two_pi;
    }
    std::sort(residues.begin(), residues.end());
    double ks = 0.0;
    const double n = double(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        const double u = residues[std::size_t(i)];
        ks = std::max(ks, std::max(std::abs(u - double(i) / n), std::abs(u - double(i + 1) / n)));
    }
    return ks;
}

namespace {

double residual_rms(const WalkParams& params, const LatticeDist& dist, const KonnoLaw& law,
                    std::int64_t t, const std::vector<double>& x_grid, double delta,
                    std::vector<double>* out_x, std::vector<double>* out_res) {
    (void)params;
    double sum2 = 0.0;
    std::size_t count = 0;
    for (double x : x_grid) {
        // nearest parity-allowed site
        const std::int64_t i = std::int64_t(std::llround((x * double(t) + double(t)) / 2.0));
        const std::int64_t k = 2 * i - t;
        const double xe = double(k) / double(t);
        if (std::abs(xe) >= kSupport) continue;
        const double lhs = double(t) * dist.prob(k) / 2.0;
        const double rhs = konno_pdf(xe, law) * (1.0 + h_oscillation(xe, t, delta));
        const double res = lhs - rhs;
        if (out_x) out_x->push_back(xe);
        if (out_res) out_res->push_back(res);
        sum2 += res * res;
        ++count;
    }
    return count ? std::sqrt(sum2 / double(count)) : 0.0;
}

std::vector<double> default_grid(double span, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[std::size_t(i)] = -span + 2.0 * span * double(i) / double(n - 1);
    return g;
}

}  // namespace

double calibrate_phase_offset(const WalkParams& params, std::int64_t t_calibrate) {
    require_unbiased(params);
    struct Key {
        double a[6];
        bool operator<(const Key& o) const {
            for (int i = 0; i < 6; ++i) {
                if (a[i] != o.a[i]) return a[i] < o.a[i];
            }
            return false;
        }
    };
    static std::map<Key, double> cache;
    static std::mutex mutex;
    const Key key{{params.angles.varsigma1, params.angles.varsigma2, params.angles.vartheta,
                   params.angles.gamma1, params.angles.gamma2, params.angles.phi}};
    {
        std::lock_guard<std::mutex> lock(mutex);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const LatticeDist dist = evolve(params, t_calibrate);
    const KonnoLaw law = make_konno_law(params);
    const std::vector<double> grid = default_grid(0.6, 321);
    double best_delta = 0.0;
    double best_rms = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 4; ++c) {
        const double delta = kPi / 2 * double(c);
        const double rms =
            residual_rms(params, dist, law, t_calibrate, grid, delta, nullptr, nullptr);
        if (rms < best_rms) {
            best_rms = rms;
            best_delta = delta;
        }
    }
    {
        std::lock_guard<std::mutex> lock(mutex);
        cache.emplace(key, best_delta);
    }
    return best_delta;
}

ResidualReport decomposition_residual(const WalkParams& params, std::int64_t t,
                                      const std::vector<double>& x_grid) {
    require_unbiased(params);
    ResidualReport rep;
    rep.t = t;
    rep.phase_offset = calibrate_phase_offset(params);
    const LatticeDist dist = evolve(params, t);
    const KonnoLaw law = make_konno_law(params);
    rep.rms = residual_rms(params, dist, law, t, x_grid, rep.phase_offset, &rep.x, &rep.residual);
    return rep;
}

OscillationReport lower_bound_chain(std::int64_t t) {
    if (t < 100) throw RangeError("lower_bound_chain: t must be >= 100");
    OscillationReport rep;
    rep.t = t;
    const NodeSet ns = oscillation_nodes(t);
    rep.node_count = ns.nodes.size();
    rep.nodes = ns.nodes;

    std::vector<double> edges = {-kSupport + kEdgeMargin};
    edges.insert(edges.end(), ns.nodes.begin(), ns.nodes.end());
    edges.push_back(kSupport - kEdgeMargin);
    double abs_h = 0.0;
    double f_weighted = 0.0;
    // f |H| integrated in the substituted variable x = sin(u)/sqrt2, where
    // the density's endpoint singularity cancels.
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double r, e;
        detail::gk15([&](double x) { return std::abs(h_oscillation(x, t)); }, edges[i],
                     edges[i + 1], r, e);
        abs_h += r;
        const double ua = std::asin(std::clamp(edges[i] / kSupport, -1.0, 1.0));
        const double ub = std::asin(std::clamp(edges[i + 1] / kSupport, -1.0, 1.0));
        detail::gk15(
            [&](double u) {
                const double x = kSupport * std::sin(u);
                return std::abs(h_oscillation(x, t)) * kSupport / (kPi * (1.0 - x * x));
            },
            ua, ub, r, e);
        f_weighted += r;
    }
    rep.abs_h_integral = abs_h;
    rep.f_weighted_integral = f_weighted;
    rep.bound_half_f_integral = abs_h / (2.0 * kPi);
    double tri = 0.0;
    for (std::size_t i = 0; i + 1 < ns.nodes.size(); ++i) {
        tri += std::abs(ns.midphase[i]) * (ns.nodes[i + 1] - ns.nodes[i]) / 4.0;
    }
    rep.bound_triangle_sum = tri;
    rep.bound_explicit = 1.0 / (8.0 * kSqrt2 * kPi);

    const WalkParams theta = symmetric_point();
    const LatticeDist walk = evolve(theta, t);
    const KonnoLaw law = make_konno_law(theta);
    const LatticeDist proj = lattice_projection(law, t, ParityMode::sublattice);
    const std::int64_t lo = std::min(walk.offset, proj.offset);
    const std::int64_t hi = std::max(walk.offset + std::int64_t(walk.probs.size()),
                                     proj.offset + std::int64_t(proj.probs.size()));
    double l1 = 0.0;
    for (std::int64_t k = lo; k < hi; ++k) l1 += std::abs(walk.prob(k) - proj.prob(k));
    rep.tv_plateau = 0.5 * l1;
    return rep;
}

nlohmann::ordered_json report_to_json(const OscillationReport& r) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["abs_h_integral"] = r.abs_h_integral;
    j["f_weighted_integral"] = r.f_weighted_integral;
    j["bound_half_f_integral"] = r.bound_half_f_integral;
    j["bound_triangle_sum"] = r.bound_triangle_sum;
    j["bound_explicit"] = r.bound_explicit;
    j["tv_plateau"] = r.tv_plateau;
    j["node_count"] = r.node_count;
    j["nodes"] = r.nodes;
    return j;
}

}  // namespace walklab
