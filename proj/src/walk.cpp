#include "walklab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "walklab/errors.hpp"
#include "walklab/kernels.hpp"

namespace walklab {

namespace {

kernels::CoinMatrix coin_matrix(const WalkParams& p) {
    return {p.u11.real(), p.u11.imag(), p.u12.real(), p.u12.imag(),
            p.u21.real(), p.u21.imag(), p.u22.real(), p.u22.imag()};
}

double packed_norm(const double* br, const double* bi, const double* Br, const double* Bi,
                   std::size_t n, std::vector<double>& scratch) {
    scratch.resize(n);
    kernels::active().site_prob(br, bi, Br, Bi, scratch.data(), n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += scratch[i];
    return s;
}

}  // namespace

double WalkState::norm() const {
    std::vector<double> scratch;
    return packed_norm(br.data(), bi.data(), Br.data(), Bi.data(), size(), scratch);
}

double LatticeDist::total_mass() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double LatticeDist::mean() const {
    double s = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) s += double(offset + std::int64_t(j)) * probs[j];
    return s;
}

double LatticeDist::second_moment() const {
    double s = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        const double k = double(offset + std::int64_t(j));
        s += k * k * probs[j];
    }
    return s;
}

double RandomizedDist::total_mass() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
}

double DensityGrid::integral() const {
    double s = 0.0;
    for (double v : pdf) s += v;
    return s * cell_width();
}

WalkState init_state(const WalkParams& params) {
    WalkState s;
    s.t = 0;
    s.br = {params.a0.real()};
    s.bi = {params.a0.imag()};
    s.Br = {params.a1.real()};
    s.Bi = {params.a1.imag()};
    return s;
}

WalkState step(const WalkState& state, const WalkParams& params) {
    const std::size_t n = state.size();
    WalkState next;
    next.t = state.t + 1;
    next.br.resize(n + 1);
    next.bi.resize(n + 1);
    next.Br.resize(n + 1);
    next.Bi.resize(n + 1);
    next.br[0] = next.bi[0] = 0.0;
    next.Br[n] = next.Bi[n] = 0.0;
    const kernels::CoinMatrix u = coin_matrix(params);
    kernels::active().coin_shift(state.br.data(), state.bi.data(), state.Br.data(),
                                 state.Bi.data(), next.br.data(), next.bi.data(),
                                 next.Br.data(), next.Bi.data(), n, u);
    if (std::abs(next.norm() - state.norm()) > 1e-12) {
        throw Error("walk step lost unitarity at t = " + std::to_string(next.t));
    }
    return next;
}

LatticeDist distribution(const WalkState& state) {
    const std::size_t n = state.size();
    std::vector<double> packed(n);
    kernels::active().site_prob(state.br.data(), state.bi.data(), state.Br.data(),
                                state.Bi.data(), packed.data(), n);
    LatticeDist d;
    d.t = state.t;
    d.offset = -state.t;
    d.probs.assign(std::size_t(2 * state.t + 1), 0.0);
    for (std::size_t i = 0; i < n; ++i) d.probs[2 * i] = packed[i];
    return d;
}

LatticeDist evolve(const WalkParams& params, std::int64_t t) {
    if (t < 0) throw RangeError("evolve: t must be nonnegative");
    if (t > kMaxWalkSteps) {
        throw CapExceeded("evolve: t exceeds cap " + std::to_string(kMaxWalkSteps));
    }
    // Two-buffer ping-pong over the packed sublattice; no renormalization,
    // norm drift is asserted per step.
    std::vector<double> abr = {params.a0.real()}, abi = {params.a0.imag()};
    std::vector<double> aBr = {params.a1.real()}, aBi = {params.a1.imag()};
    std::vector<double> bbr, bbi, bBr, bBi, scratch;
    const std::size_t cap = std::size_t(t) + 1;
    abr.reserve(cap), abi.reserve(cap), aBr.reserve(cap), aBi.reserve(cap);
    bbr.reserve(cap), bbi.reserve(cap), bBr.reserve(cap), bBi.reserve(cap);
    const kernels::CoinMatrix u = coin_matrix(params);
    const kernels::KernelTable& k = kernels::active();
    double prev_norm = packed_norm(abr.data(), abi.data(), aBr.data(), aBi.data(), 1, scratch);
    for (std::int64_t s = 0; s < t; ++s) {
        const std::size_t n = std::size_t(s) + 1;
        bbr.resize(n + 1), bbi.resize(n + 1), bBr.resize(n + 1), bBi.resize(n + 1);
        bbr[0] = bbi[0] = 0.0;
        bBr[n] = bBi[n] = 0.0;
        k.coin_shift(abr.data(), abi.data(), aBr.data(), aBi.data(), bbr.data(), bbi.data(),
                     bBr.data(), bBi.data(), n, u);
        abr.swap(bbr), abi.swap(bbi), aBr.swap(bBr), aBi.swap(bBi);
        const double norm =
            packed_norm(abr.data(), abi.data(), aBr.data(), aBi.data(), n + 1, scratch);
        if (std::abs(norm - prev_norm) > 1e-12) {
            throw Error("walk step lost unitarity at t = " + std::to_string(s + 1));
        }
        prev_norm = norm;
    }
    const std::size_t n = std::size_t(t) + 1;
    std::vector<double> packed(n);
    k.site_prob(abr.data(), abi.data(), aBr.data(), aBi.data(), packed.data(), n);
    LatticeDist d;
    d.t = t;
    d.offset = -t;
    d.probs.assign(std::size_t(2 * t + 1), 0.0);
    for (std::size_t i = 0; i < n; ++i) d.probs[2 * i] = packed[i];
    return d;
}

RandomizedDist randomize(const LatticeDist& dist, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) throw RangeError("randomize: eta must be in (0, 1)");
    RandomizedDist out;
    out.t = dist.t;
    out.eta = eta;
    out.r = std::int64_t(std::floor(eta * double(dist.t)));
    if (out.r < 1) {
        out.r = 0;
        out.offset = dist.offset;
        out.probs = dist.probs;
        return out;
    }
    const std::int64_t r = out.r;
    const std::int64_t n = std::int64_t(dist.probs.size());
    std::vector<double> prefix(std::size_t(n) + 1, 0.0);
    for (std::int64_t j = 0; j < n; ++j) {
        prefix[std::size_t(j + 1)] = prefix[std::size_t(j)] + dist.probs[std::size_t(j)];
    }
    out.offset = dist.offset - r + 1;
    const std::int64_t m = n + 2 * r - 1;
    out.probs.assign(std::size_t(m), 0.0);
    const double inv = 1.0 / double(2 * r);
    for (std::int64_t j = 0; j < m; ++j) {
        const std::int64_t y = out.offset + j;
        const std::int64_t klo = std::max(y - r, dist.offset);
        const std::int64_t khi = std::min(y + r - 1, dist.offset + n - 1);
        if (klo > khi) continue;
        const double w =
            prefix[std::size_t(khi - dist.offset + 1)] - prefix[std::size_t(klo - dist.offset)];
        out.probs[std::size_t(j)] = inv * w;
    }
    return out;
}

double smoothed_cdf(const LatticeDist& dist, double eta, double x) {
    // Mass from site k spreads uniformly over (k/t - eta, k/t + eta].
    const double t = double(dist.t);
    double cdf = 0.0;
    for (std::size_t j = 0; j < dist.probs.size(); ++j) {
        const double p = dist.probs[j];
        if (p == 0.0) continue;
        const double center = double(dist.offset + std::int64_t(j)) / t;
        const double u = (x - (center - eta)) / (2.0 * eta);
        cdf += p * std::clamp(u, 0.0, 1.0);
    }
    return cdf;
}

DensityGrid smooth_pdf(const LatticeDist& dist, double eta, const GridSpec& grid) {
    if (!(eta > 0.0 && eta < 1.0)) throw RangeError("smooth_pdf: eta must be in (0, 1)");
    if (grid.lo > -1.0 || grid.hi < 1.0 || grid.cells < 1) {
        throw RangeError("smooth_pdf: grid must cover [-1, 1]");
    }
    const double width = (grid.hi - grid.lo) / double(grid.cells);
    if (width > eta / 4.0) {
        throw GridTooCoarse("smooth_pdf: cell width exceeds eta/4");
    }
    // Cell masses from the exact piecewise-linear CDF of the convolution,
    // evaluated with per-site prefix sums in O(cells + sites).
    const double t = double(dist.t);
    const std::int64_t n = std::int64_t(dist.probs.size());
    std::vector<double> prefix_p(std::size_t(n) + 1, 0.0);
    std::vector<double> prefix_c(std::size_t(n) + 1, 0.0);  // sum of p * center
    for (std::int64_t j = 0; j < n; ++j) {
        const double p = dist.probs[std::size_t(j)];
        const double center = double(dist.offset + j) / t;
        prefix_p[std::size_t(j + 1)] = prefix_p[std::size_t(j)] + p;
        prefix_c[std::size_t(j + 1)] = prefix_c[std::size_t(j)] + p * center;
    }
    const auto center_of = [&](std::int64_t j) { return double(dist.offset + j) / t; };
    // count of sites with center <= y
    const auto count_le = [&](double y) -> std::int64_t {
        std::int64_t j = std::int64_t(std::floor(y * t)) - dist.offset + 1;
        j = std::clamp<std::int64_t>(j, 0, n);
        while (j < n && center_of(j) <= y) ++j;
        while (j > 0 && center_of(j - 1) > y) --j;
        return j;
    };
    const auto cdf = [&](double x) -> double {
        const std::int64_t lo = count_le(x - eta);
        const std::int64_t hi = count_le(x + eta);
        const double full = prefix_p[std::size_t(lo)];
        const double pw = prefix_p[std::size_t(hi)] - prefix_p[std::size_t(lo)];
        const double cw = prefix_c[std::size_t(hi)] - prefix_c[std::size_t(lo)];
        return full + ((x + eta) * pw - cw) / (2.0 * eta);
    };
    DensityGrid out;
    out.lo = grid.lo;
    out.hi = grid.hi;
    out.pdf.resize(std::size_t(grid.cells));
    double prev = cdf(grid.lo);
    for (int c = 0; c < grid.cells; ++c) {
        const double edge = grid.lo + width * double(c + 1);
        const double next = cdf(edge);
        out.pdf[std::size_t(c)] = (next - prev) / width;
        prev = next;
    }
    return out;
}

}  // namespace walklab
