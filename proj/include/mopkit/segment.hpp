#pragma once

#include <optional>
#include <vector>

#include "mopkit/functional.hpp"

namespace mopkit {

enum class HorizonReason {
    None,                // Delta_N nonsingular, segment complete to the requested degree
    SingularHankel,      // some Delta_n singular: maximal segment reached
    MomentsUndetermined  // the Pearson recurrence stopped determining moments
};
const char* to_string(HorizonReason r);

struct SegmentOptions {
    // Turn RecurrenceBlocked from the moment source into a horizon instead of rethrowing.
    bool truncate_on_blocked_recurrence = false;
};

// Monic left MOP P_0..P_n of a functional, with E_k = <x^k P_k, u> and
// pi_k = coefficient of x^{k-1} in P_k (pi_0 = 0).
struct MonicSegment {
    Index dim = 1;
    std::vector<MatrixPolynomial> polys;
    std::vector<CMatrix> E;
    std::vector<CMatrix> pi;
    // beta[k] = pi_k - pi_{k+1} for k <= n-1; gamma[k] = E_k E_{k-1}^{-1} for 1 <= k <= n,
    // gamma[0] is a zero placeholder (P_{-1} = 0).
    std::vector<CMatrix> beta;
    std::vector<CMatrix> gamma;

    bool horizon_flag = false;
    HorizonReason reason = HorizonReason::None;
    std::optional<std::size_t> blocked_at;
    // The unique monic polynomial of the next degree orthogonal to all lower degrees:
    // "extra" when the segment stopped early, "next" when it did not.
    std::optional<MatrixPolynomial> extra;
    std::optional<MatrixPolynomial> next;

    double orthogonality_residual = 0.0;  // max_{j<k} |<x^j P_k, u>| / |E_k|
    double recurrence_residual = 0.0;

    std::size_t length() const { return polys.size(); }
    // P_{k} for k <= n, otherwise the next/extra polynomial.
    const MatrixPolynomial& poly_or_next(std::size_t k) const;
};

MonicSegment compute_segment(const Functional& u, std::size_t N, const Tolerance& tol = {},
                             SegmentOptions opts = {});

struct Recurrence {
    std::vector<CMatrix> beta;
    std::vector<CMatrix> gamma;
    double residual = 0.0;  // max_k |x P_k - P_{k+1} - beta_k P_k - gamma_k P_{k-1}| / |x P_k|
};

Recurrence recurrence_coefficients(const MonicSegment& seg, const Tolerance& tol = {});

// Moments of the functional whose monic MOP obey x P_k = P_{k+1} + beta_k P_k + gamma_k P_{k-1}.
// beta has N entries; gamma has N or N+1 entries with gamma[0] ignored. Returns moments up
// to 2N-1, or 2N when gamma_N is supplied.
Functional favard_roundtrip(const std::vector<CMatrix>& beta, const std::vector<CMatrix>& gamma,
                            const CMatrix& mu0, const Tolerance& tol = {});

struct DerivativeSegment {
    MonicSegment seg;                 // Q_{k-1} = P'_k / k, E computed directly against u_tilde
    std::vector<CMatrix> E_formula;   // -(1/k) E_k (psi_1 + (k-1) phi_2)
    double orthogonality_residual = 0.0;
    double bracket_identity_residual = 0.0;  // <x^{k-1} P'_k, u~> + E_k M_{k-1}, relative
    Functional u_tilde;
};

// Derivatives of a segment of u, checked against u~ = u Phi. Throws DerivativeNotOrthogonal(k)
// when psi_1 + (k-1) phi_2 is singular.
DerivativeSegment derivative_segment(const MonicSegment& seg, const PearsonSpec& spec, const Functional& u,
                                     const Tolerance& tol = {});

// Pearson-free test: do the monic derivatives Q_k = P'_{k+1}/(k+1) satisfy a three-term
// recurrence? defect[k] is the relative remainder of x Q_k - Q_{k+1} after removing its
// Q_k and Q_{k-1} components; by Favard it vanishes iff the derivatives can be orthogonal.
std::vector<double> derivative_recurrence_defect(const MonicSegment& seg);

struct LadderCoefficients {
    // Indexed by n = 1..; entry 0 is an unused placeholder.
    std::vector<CMatrix> a;
    std::vector<CMatrix> b;
    std::vector<double> residual;
    std::vector<bool> gamma_minus_b_nonsingular;
    double max_residual = 0.0;
};

// P_n = P'_{n+1}/(n+1) + a_n P'_n + b_n P'_{n-1}
LadderCoefficients ladder_coefficients(const MonicSegment& seg, const DerivativeSegment& dseg,
                                       const Tolerance& tol = {});

struct LadderPair {
    MatrixPolynomial p_minus;  // closed form for P'_{n-1}
    MatrixPolynomial p_plus;   // closed form for P'_{n+1}
};

LadderPair ladder_relations(const MonicSegment& seg, const PearsonSpec& spec, std::size_t n,
                            const Tolerance& tol = {});

// Smallest p <= pmax with <x^k P_n, v> = 0 for k < n - p and every P_n of the segment.
std::optional<std::size_t> quasi_orthogonality_order(const MonicSegment& seg, const Functional& v,
                                                     std::size_t pmax, const Tolerance& tol = {});

// max_{j<k} |<x^j Q_k, v>| / |<x^k Q_k, v>| over the given monic polynomials (Q_k of degree k).
double orthogonality_defect(const std::vector<MatrixPolynomial>& Q, const Functional& v, double abs_floor = 1e-300);

}  // namespace mopkit
