#include "walklab/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace walklab::kernels {

namespace {

// Same expression tree as the scalar kernel, four sites per iteration.
// mul/add only (no fma) keeps results bitwise equal to the reference.
void coin_shift_avx2(const double* br, const double* bi, const double* Br, const double* Bi,
                     double* obr, double* obi, double* oBr, double* oBi, std::size_t n,
                     const CoinMatrix& u) {
    const __m256d u11r = _mm256_set1_pd(u.u11r), u11i = _mm256_set1_pd(u.u11i);
    const __m256d u12r = _mm256_set1_pd(u.u12r), u12i = _mm256_set1_pd(u.u12i);
    const __m256d u21r = _mm256_set1_pd(u.u21r), u21i = _mm256_set1_pd(u.u21i);
    const __m256d u22r = _mm256_set1_pd(u.u22r), u22i = _mm256_set1_pd(u.u22i);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xr = _mm256_loadu_pd(br + i);
        const __m256d xi = _mm256_loadu_pd(bi + i);
        const __m256d yr = _mm256_loadu_pd(Br + i);
        const __m256d yi = _mm256_loadu_pd(Bi + i);
        const __m256d mbr = _mm256_add_pd(
            _mm256_sub_pd(_mm256_mul_pd(u11r, xr), _mm256_mul_pd(u11i, xi)),
            _mm256_sub_pd(_mm256_mul_pd(u12r, yr), _mm256_mul_pd(u12i, yi)));
        const __m256d mbi = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(u11r, xi), _mm256_mul_pd(u11i, xr)),
            _mm256_add_pd(_mm256_mul_pd(u12r, yi), _mm256_mul_pd(u12i, yr)));
        const __m256d mBr = _mm256_add_pd(
            _mm256_sub_pd(_mm256_mul_pd(u21r, xr), _mm256_mul_pd(u21i, xi)),
            _mm256_sub_pd(_mm256_mul_pd(u22r, yr), _mm256_mul_pd(u22i, yi)));
        const __m256d mBi = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(u21r, xi), _mm256_mul_pd(u21i, xr)),
            _mm256_add_pd(_mm256_mul_pd(u22r, yi), _mm256_mul_pd(u22i, yr)));
        _mm256_storeu_pd(obr + i + 1, mbr);
        _mm256_storeu_pd(obi + i + 1, mbi);
        _mm256_storeu_pd(oBr + i, mBr);
        _mm256_storeu_pd(oBi + i, mBi);
    }
    for (; i < n; ++i) {
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

void site_prob_avx2(const double* br, const double* bi, const double* Br, const double* Bi,
                    double* p, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xr = _mm256_loadu_pd(br + i);
        const __m256d xi = _mm256_loadu_pd(bi + i);
        const __m256d yr = _mm256_loadu_pd(Br + i);
        const __m256d yi = _mm256_loadu_pd(Bi + i);
        const __m256d s = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(xr, xr), _mm256_mul_pd(xi, xi)),
            _mm256_add_pd(_mm256_mul_pd(yr, yr), _mm256_mul_pd(yi, yi)));
        _mm256_storeu_pd(p + i, s);
    }
    for (; i < n; ++i) {
        p[i] = (br[i] * br[i] + bi[i] * bi[i]) + (Br[i] * Br[i] + Bi[i] * Bi[i]);
    }
}

}  // namespace

const KernelTable* avx2_kernels() {
    static const KernelTable table{coin_shift_avx2, site_prob_avx2, "avx2"};
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    return &table;
}

}  // namespace walklab::kernels

#else

namespace walklab::kernels {

const KernelTable* avx2_kernels() { return nullptr; }

}  // namespace walklab::kernels

#endif
