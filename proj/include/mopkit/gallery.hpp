#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mopkit/pearson.hpp"
#include "mopkit/zeroclass.hpp"

namespace mopkit::gallery {

// integral of x^k e^{-x^2} over R
double gaussian_moments(std::size_t k);
// integral over (0, inf) of x^{r+k} e^{-x}, and the same against ln x
double gamma_moments(double r, std::size_t k);
double gamma_log_moments(double r, std::size_t k);
// x^r e^{B/x} on the unit circle: 2 pi i B^{n+r+1} / (n+r+1)!
CMatrix circle_bessel_moments(const CMatrix& B, int r, std::size_t n);
// sum_k (A)_k^{-1} B^k x^{-(k+1)} on the unit circle: 2 pi i (A)_n^{-1} B^n
CMatrix circle_series_moments(const CMatrix& A, const CMatrix& B, std::size_t n);

struct Params {
    std::map<std::string, cplx> scalars;
    std::map<std::string, CMatrix> matrices;

    cplx get(const std::string& key, cplx fallback) const;
    double real(const std::string& key, double fallback) const;  // InvalidParameter if complex
    CMatrix matrix(const std::string& key, const CMatrix& fallback) const;
};

// Printed right-sided ODE P'' F + P' G + Lambda_n P = 0 with Lambda_n = n (L0 + n L1).
struct OdeFixture {
    MatrixPolynomial F, G;
    CMatrix L0, L1;
    CMatrix Lambda(std::size_t n) const;
};

// Entries of R(x) as coefficient vectors over a basis of functions, row-major.
struct SymbolicWeight {
    std::vector<std::string> basis;
    std::vector<std::vector<cplx>> entries;
};

struct GalleryEntry {
    std::string name;
    std::string description;
    Params params;
    Functional functional = Functional::from_moments({CMatrix::Identity(1, 1)});
    std::optional<PearsonSpec> pearson;        // printed (Phi, Psi)
    std::optional<PearsonSpec> class_pair;     // printed D(u alpha I) = u Psi
    std::optional<ZeroClassSpec> zero_class;
    std::map<std::string, PearsonPair> pairs;  // further printed pairs
    std::optional<CMatrix> phi0_factor;        // Phi^{(0)} = Phi * factor
    std::optional<Functional> u1_printed;      // printed weight of u Phi^{(0)}
    std::optional<OdeFixture> ode;
    std::optional<SymbolicWeight> symbolic;
    std::map<std::string, double> expected;
};

std::vector<std::string> names();
std::string describe(const std::string& name);
GalleryEntry build(const std::string& name, const Params& params = {});

}  // namespace mopkit::gallery
