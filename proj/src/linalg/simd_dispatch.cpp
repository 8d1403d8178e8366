#include <atomic>
#include <cstdlib>
#include <cstring>

#include "mopkit/simd.hpp"

namespace mopkit::simd {

namespace {

Isa detect() {
    if (const char* env = std::getenv("MOPKIT_ISA"); env && std::strcmp(env, "scalar") == 0)
        return Isa::Scalar;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) && defined(MOPKIT_BUILD_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

Isa set_isa(Isa isa) {
    if (isa == Isa::Avx2 && !avx2_available()) isa = Isa::Scalar;
    current().store(isa);
    return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

void caxpy(std::span<cplx> y, cplx a, std::span<const cplx> x) {
    if (active_isa() == Isa::Avx2)
        avx2::caxpy(y, a, x);
    else
        scalar::caxpy(y, a, x);
}

ArgMax argmax_abs2(std::span<const cplx> x) {
    return active_isa() == Isa::Avx2 ? avx2::argmax_abs2(x) : scalar::argmax_abs2(x);
}

}  // namespace mopkit::simd
