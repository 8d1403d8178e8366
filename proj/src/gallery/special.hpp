#pragma once

#include <complex>

namespace mopkit::special {

// Gamma via Lanczos (g = 7, 9 terms) with reflection; exact products at positive
// integers and half-integers.
double gamma(double x);
std::complex<double> gamma(std::complex<double> z);
std::complex<double> lgamma(std::complex<double> z);
// Asymptotic series after shifting the argument up past 10.
double digamma(double x);

}  // namespace mopkit::special
