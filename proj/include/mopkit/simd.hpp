#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "mopkit/types.hpp"

// Inner loops of the pivoted elimination. Each kernel has a portable reference
// version and an AVX2+FMA version; the dispatcher picks one once at startup.
namespace mopkit::simd {

enum class Isa { Scalar, Avx2 };

struct ArgMax {
    std::size_t index = 0;
    double value = -1.0;  // largest |z|^2; -1 for an empty range
};

// y[i] += a * x[i]
void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
ArgMax argmax_abs2(std::span<const cplx> x);

Isa active_isa();
std::string_view isa_name(Isa isa);
// Force a variant (for tests); Avx2 is ignored on CPUs without it. Returns the ISA in effect.
Isa set_isa(Isa isa);
bool avx2_available();

namespace scalar {
void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
ArgMax argmax_abs2(std::span<const cplx> x);
}  // namespace scalar

namespace avx2 {
void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
ArgMax argmax_abs2(std::span<const cplx> x);
}  // namespace avx2

}  // namespace mopkit::simd
