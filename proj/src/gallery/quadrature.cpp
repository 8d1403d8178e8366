#include "gallery/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace mopkit::quad {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTmax = 6.0;  // far enough for (1 +- x)^r tails with r near -1

// Contribution of the node pair +-t.
std::complex<double> pair(const Integrand& f, double t) {
    const double u = kHalfPi * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = kHalfPi * std::cosh(t) / (cu * cu);
    if (w == 0.0) return 0.0;
    const double comp = 1.0 / (std::exp(u) * cu);  // 1 - tanh(u) for u >= 0
    const double x = std::tanh(u);
    if (t == 0.0) return w * f(0.0, 1.0, 1.0);
    std::complex<double> s = 0.0;
    if (comp > 0.0) {
        s += f(x, 2.0 - comp, comp);   // x near +1
        s += f(-x, comp, 2.0 - comp);  // x near -1
    }
    return w * s;
}

}  // namespace

Result tanh_sinh(const Integrand& f, double rel_tol, int max_levels) {
    double h = 0.5;
    std::complex<double> sum = pair(f, 0.0);
    for (double t = h; t <= kTmax; t += h) sum += pair(f, t);
    std::complex<double> est = h * sum;
    Result r;
    for (int level = 1; level <= max_levels; ++level) {
        h /= 2.0;
        for (double t = h; t <= kTmax; t += 2.0 * h) sum += pair(f, t);
        const std::complex<double> next = h * sum;
        r.error_estimate = std::abs(next - est);
        r.value = next;
        r.levels = level;
        if (level >= 3 && r.error_estimate <= rel_tol * std::abs(next)) break;
        est = next;
    }
    return r;
}

}  // namespace mopkit::quad
