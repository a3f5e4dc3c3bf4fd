#pragma once

#include <cstddef>

namespace walklab::kernels {

struct CoinMatrix {
    double u11r, u11i, u12r, u12i;
    double u21r, u21i, u22r, u22i;
};

// One walk step on the packed parity sublattice (n occupied sites).
// Mixes the coin at every site, then shifts: coin-0 output lands at packed
// index i+1, coin-1 output at packed index i. Writes ob*/oB* on [1..n] and
// [0..n-1] respectively; the caller zeroes ob*[0] and oB*[n].
using CoinShiftFn = void (*)(const double* br, const double* bi, const double* Br,
                             const double* Bi, double* obr, double* obi, double* oBr,
                             double* oBi, std::size_t n, const CoinMatrix& u);

// Sitewise probability: p[i] = br^2 + bi^2 + Br^2 + Bi^2. Elementwise only;
// reductions are done by callers so results do not depend on the variant.
using SiteProbFn = void (*)(const double* br, const double* bi, const double* Br,
                            const double* Bi, double* p, std::size_t n);

struct KernelTable {
    CoinShiftFn coin_shift;
    SiteProbFn site_prob;
    const char* name;
};

const KernelTable& scalar_kernels();
const KernelTable* avx2_kernels();  // nullptr when unavailable at runtime

// Active table: best supported variant unless overridden.
const KernelTable& active();

// Force "scalar", "avx2", or "auto". Throws Error for unknown/unsupported.
void force_variant(const char* name);

}  // namespace walklab::kernels
