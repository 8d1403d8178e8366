#include "mopkit/simd.hpp"

namespace mopkit::simd::scalar {

void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = cplx(y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr));
    }
}

ArgMax argmax_abs2(std::span<const cplx> x) {
    ArgMax best;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
        if (v > best.value) {
            best.value = v;
            best.index = i;
        }
    }
    return best;
}

}  // namespace mopkit::simd::scalar
