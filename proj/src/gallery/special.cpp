#include "gallery/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace mopkit::special {

namespace {

using cd = std::complex<double>;

constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_positive_int(double x) { return x > 0 && x <= 171 && x == std::floor(x); }
bool is_positive_half(double x) { return x > 0 && x <= 171 && (x - 0.5) == std::floor(x - 0.5); }

cd lanczos_log(cd z) {
    // log Gamma(z) for Re z >= 1/2
    z -= 1.0;
    cd a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[static_cast<std::size_t>(i)] / (z + static_cast<double>(i));
    const cd t = z + kG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace

cd lgamma(cd z) {
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * z)) - lanczos_log(1.0 - z);
    }
    return lanczos_log(z);
}

cd gamma(cd z) {
    if (z.imag() == 0.0) return gamma(z.real());
    return std::exp(lgamma(z));
}

double gamma(double x) {
    if (is_positive_int(x)) {
        double f = 1.0;
        for (double k = 2.0; k < x; k += 1.0) f *= k;
        return f;
    }
    if (is_positive_half(x)) {
        double f = std::sqrt(std::numbers::pi);
        for (double k = 0.5; k < x; k += 1.0) f *= k;
        return f;
    }
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
    return std::exp(lanczos_log(cd(x, 0.0)).real());
}

double digamma(double x) {
    double acc = 0.0;
    if (x <= 0.0 && x == std::floor(x)) return std::nan("");
    if (x < 0.5) {
        // psi(1-x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
    }
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    // Bernoulli terms B_{2k}/(2k)
    double series = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

}  // namespace mopkit::special
