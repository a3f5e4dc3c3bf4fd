#pragma once

// Independent brute-force walk oracle for tests: dense amplitude vectors over
// the full lattice [-t, t], coin applied sitewise then shifted. Kept separate
// from the packed production path on purpose.

#include <complex>
#include <vector>

#include "walklab/params.hpp"

namespace walklab::testing {

struct NaiveDist {
    std::int64_t t = 0;
    std::vector<double> probs;  // index k + t, site k in [-t, t]

    double prob(std::int64_t k) const {
        const std::int64_t j = k + t;
        return (j >= 0 && j < std::int64_t(probs.size())) ? probs[std::size_t(j)] : 0.0;
    }
};

inline NaiveDist naive_evolve(const WalkParams& p, std::int64_t t) {
    using C = std::complex<double>;
    const std::size_t n = std::size_t(2 * t + 1);
    std::vector<C> b(n, C(0.0)), B(n, C(0.0));
    b[std::size_t(t)] = p.a0;  // site 0
    B[std::size_t(t)] = p.a1;
    std::vector<C> nb(n), nB(n);
    for (std::int64_t s = 0; s < t; ++s) {
        std::fill(nb.begin(), nb.end(), C(0.0));
        std::fill(nB.begin(), nB.end(), C(0.0));
        for (std::size_t j = 0; j < n; ++j) {
            const C mb = p.u11 * b[j] + p.u12 * B[j];
            const C mB = p.u21 * b[j] + p.u22 * B[j];
            if (j + 1 < n) nb[j + 1] += mb;
            if (j >= 1) nB[j - 1] += mB;
        }
        b.swap(nb);
        B.swap(nB);
    }
    NaiveDist d;
    d.t = t;
    d.probs.resize(n);
    for (std::size_t j = 0; j < n; ++j) d.probs[j] = std::norm(b[j]) + std::norm(B[j]);
    return d;
}

}  // namespace walklab::testing
