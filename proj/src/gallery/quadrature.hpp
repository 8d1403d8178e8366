#pragma once

#include <complex>
#include <functional>

namespace mopkit::quad {

// f(x, 1 + x, 1 - x); the complements are exact near the endpoints so algebraic and
// logarithmic endpoint singularities can be evaluated without cancellation.
using Integrand = std::function<std::complex<double>(double, double, double)>;

struct Result {
    std::complex<double> value;
    double error_estimate = 0.0;
    int levels = 0;
};

// Tanh-sinh rule on (-1, 1), halving the step until two levels agree to rel_tol.
Result tanh_sinh(const Integrand& f, double rel_tol = 1e-13, int max_levels = 12);

}  // namespace mopkit::quad
