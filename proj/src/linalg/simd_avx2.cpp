#include "mopkit/simd.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define MOPKIT_HAVE_AVX2_TU 1
#endif

namespace mopkit::simd::avx2 {

#ifdef MOPKIT_HAVE_AVX2_TU

// std::complex<double> is laid out as {re, im}; one __m256d holds two values.
void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x) {
    const std::size_t n = y.size();
    auto* yp = reinterpret_cast<double*>(y.data());
    const auto* xp = reinterpret_cast<const double*>(x.data());
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d xs = _mm256_permute_pd(xv, 0b0101);  // {im, re, im, re}
        // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
        const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
    }
    if (i < n) scalar::caxpy(y.subspan(i), a, x.subspan(i));
}

ArgMax argmax_abs2(std::span<const cplx> x) {
    const std::size_t n = x.size();
    if (n < 4) return scalar::argmax_abs2(x);
    const auto* xp = reinterpret_cast<const double*>(x.data());
    __m256d best = _mm256_set1_pd(-1.0);
    __m256d best_idx = _mm256_setzero_pd();
    __m256d idx = _mm256_setr_pd(0.0, 0.0, 1.0, 1.0);
    const __m256d step = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(xp + 2 * i);
        const __m256d sq = _mm256_mul_pd(v, v);
        const __m256d nrm = _mm256_hadd_pd(sq, sq);  // {|x_i|^2, |x_i|^2, |x_i+1|^2, |x_i+1|^2}
        const __m256d gt = _mm256_cmp_pd(nrm, best, _CMP_GT_OQ);
        best = _mm256_blendv_pd(best, nrm, gt);
        best_idx = _mm256_blendv_pd(best_idx, idx, gt);
        idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double b[4], bi[4];
    _mm256_store_pd(b, best);
    _mm256_store_pd(bi, best_idx);
    ArgMax out;
    // lane 0 tracks even positions, lane 2 odd ones; ties go to the smaller index
    for (int lane : {0, 2}) {
        const auto k = static_cast<std::size_t>(bi[lane]);
        if (b[lane] > out.value || (b[lane] == out.value && k < out.index)) {
            out.value = b[lane];
            out.index = k;
        }
    }
    for (; i < n; ++i) {
        const double v = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
        if (v > out.value) {
            out.value = v;
            out.index = i;
        }
    }
    return out;
}

#else

void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x) { scalar::caxpy(y, a, x); }
ArgMax argmax_abs2(std::span<const cplx> x) { return scalar::argmax_abs2(x); }

#endif

}  // namespace mopkit::simd::avx2
