#include "walklab/kernels.hpp"

namespace walklab::kernels {

namespace {

// Reference implementation. The AVX2 variant mirrors this operation order
// exactly (mul/add only, no fma) so both produce bitwise-identical output.
void coin_shift_scalar(const double* br, const double* bi, const double* Br, const double* Bi,
                       double* obr, double* obi, double* oBr, double* oBi, std::size_t n,
                       const CoinMatrix& u) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = br[i], xi = bi[i], yr = Br[i], yi = Bi[i];
        const double mbr = (u.u11r * xr - u.u11i * xi) + (u.u12r * yr - u.u12i * yi);
        const double mbi = (u.u11r * xi + u.u11i * xr) + (u.u12r * yi + u.u12i * yr);
        const double mBr = (u.u21r * xr - u.u21i * xi) + (u.u22r * yr - u.u22i * yi);
        const double mBi = (u.u21r * xi + u.u21i * xr) + (u.u22r * yi + u.u22i * yr);
        obr[i + 1] = mbr;
        obi[i + 1] = mbi;
        oBr[i] = mBr;
        oBi[i] = mBi;
    }
}

void site_prob_scalar(const double* br, const double* bi, const double* Br, const double* Bi,
                      double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = (br[i] * br[i] + bi[i] * bi[i]) + (Br[i] * Br[i] + Bi[i] * Bi[i]);
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{coin_shift_scalar, site_prob_scalar, "scalar"};
    return table;
}

}  // namespace walklab::kernels
