#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mopkit/segment.hpp"

namespace mopkit {

// D(u alpha I) = u Psi with alpha = alpha_0 + alpha_1 x + alpha_2 x^2 and Psi = psi_0 + psi_1 x.
struct ZeroClassSpec {
    std::array<cplx, 3> alpha{1.0, 0.0, 0.0};
    CMatrix psi0;
    CMatrix psi1;
    CMatrix mu0;

    ZeroClassSpec() = default;
    ZeroClassSpec(std::array<cplx, 3> alpha, CMatrix psi0, CMatrix psi1, CMatrix mu0);
    // Requires Phi = alpha I with deg alpha <= 2 and deg Psi <= 1.
    static ZeroClassSpec from_pearson(const PearsonSpec& spec, const Tolerance& tol = {});

    Index dim() const { return mu0.rows(); }
    MatrixPolynomial alpha_poly() const;  // dim 1
    MatrixPolynomial Psi() const;
    PearsonSpec to_pearson() const;
};

// alpha_0 I + alpha_1 X + alpha_2 X^2
CMatrix alpha_at(const std::array<cplx, 3>& alpha, const CMatrix& X);

// M_n, N_n, V_n (V_{-1} = I), X_n = -N_n M_{2n}^{-1} and alpha(X_n), memoized.
class Ladders {
public:
    explicit Ladders(ZeroClassSpec spec, Tolerance tol = {});
    const ZeroClassSpec& spec() const { return spec_; }
    CMatrix M(long n) const;
    CMatrix N(long n) const;
    const CMatrix& V(long n);
    const CMatrix& X(long n);
    const CMatrix& alphaeval(long n);
    bool M_nonsingular(long n) const;

private:
    ZeroClassSpec spec_;
    Tolerance tol_;
    std::map<long, CMatrix> V_, X_, A_;
};

struct ExistenceReport {
    bool quasi_definite = false;   // all conditions hold through n_max
    std::size_t n_max = 0;
    std::size_t segment_degree = 0;  // P_0..P_n certified, n = segment_degree
    std::optional<std::size_t> blocked_index;
    std::string reason;  // first failing condition
    // Hankel-path cross-check (skipped when mu0 is singular)
    bool cross_checked = false;
    bool agrees = false;
    std::size_t hankel_degree = 0;
    HorizonReason hankel_reason = HorizonReason::None;
};

ExistenceReport existence_check(const ZeroClassSpec& spec, std::size_t n_max, const Tolerance& tol = {});

// Closed forms; ClosedFormBlocked(index) on a singular ladder factor.
CMatrix closed_form_E(Ladders& L, std::size_t n);
CMatrix closed_form_pi(Ladders& L, std::size_t n);
struct ClosedFormRatios {
    CMatrix Pi;     // E_n^{-1} pi_n E_n
    CMatrix ratio;  // E_n^{-1} E_{n+1}
};
ClosedFormRatios closed_form_ratios(Ladders& L, std::size_t n);

enum class CanonicalTag { Hermite, Laguerre, Jacobi, Bessel };
const char* to_string(CanonicalTag t);

struct CanonicalType {
    CanonicalTag tag = CanonicalTag::Hermite;
    cplx a{1.0, 0.0}, b{0.0, 0.0};  // t(x) = a x + b
    bool real_roots = true;
    std::vector<cplx> roots;
    cplx kappa{1.0, 0.0};  // alpha(t^{-1}(y)) = kappa * canonical(y)
};

CanonicalType canonical_type(const ZeroClassSpec& spec, const Tolerance& tol = {});
// Spec of u_t (<P, u_t> = <P o t, u>) with alpha replaced by the canonical polynomial.
// Throws InvalidTransform for a complex t unless allow_complex.
ZeroClassSpec canonical_spec(const ZeroClassSpec& spec, const CanonicalType& ct, bool allow_complex = false);

// a2 P'' + a1 P' + a0 P = 0, coefficients multiplying from the left (or right when right_sided,
// where the equation reads P'' a2 + P' a1 + a0 P with a0 on the left).
struct OdeTriple {
    MatrixPolynomial a2, a1, a0;
    bool right_sided = false;
    double residual = 0.0;  // |residual polynomial| / |P coefficients|
};

MatrixPolynomial ode_apply(const OdeTriple& ode, const MatrixPolynomial& P);

struct OdeReport {
    std::size_t n = 0;
    OdeTriple L1;  // monic P_n
    OdeTriple L2;  // Q_n = (E_n V_{n-1})^{-1} P_n
    std::optional<OdeTriple> R;
    std::string R_skipped;
};

OdeReport ode_coefficients(Ladders& L, const Functional& u, const MonicSegment& seg, std::size_t n,
                           const Tolerance& tol = {});

// P'' Phi^* + P' Psi^* - n M_{n-1}^* P = 0 for a Pearson pair with u and u Phi hermitian.
// Throws HermiticityRequired otherwise.
OdeTriple right_ode(const PearsonSpec& spec, const Functional& u, const MonicSegment& seg, std::size_t n,
                    const Tolerance& tol = {});

// Back-substitution of (n-k) M_{k+n-1} c_k = (k+1)[N_k c_{k+1} + (k+2) alpha_0 c_{k+2}].
MatrixPolynomial ode_solve(Ladders& L, std::size_t n, const CMatrix& leading);
CMatrix kappa(Ladders& L, std::size_t n);

struct StructureRelation {
    // entries indexed by n = 1..; entry 0 unused
    std::vector<CMatrix> eta, theta;
    std::vector<double> residual;
    std::vector<double> sigma_residual;  // assembled Sigma_n vs n E_n M_{n-1} E_n^{-1}
    double max_residual = 0.0;
    double max_sigma_residual = 0.0;
};

StructureRelation structure_relation(const ZeroClassSpec& spec, const MonicSegment& seg, const Tolerance& tol = {});

struct ObstructionResult {
    CMatrix residual;     // lhs - rhs
    double relative = 0.0;
    bool corollary_form = false;
};

// psi_0^* mu_{n+1} psi_1 - psi_1^* mu_{n+1} psi_0 - i 2n(n+1)(A_0 mu_{n-1} + A_1 mu_n + A_2 mu_{n+1}).
// With corollary = true the left side is psi_1^* [mu_{n+1}, mu_1] psi_1 (needs mu_0 = I).
// Throws HypothesisViolated listing non-hermitian moments.
ObstructionResult hermiticity_obstruction(const Functional& u, const ZeroClassSpec& spec, std::size_t n,
                                          bool corollary = false, const Tolerance& tol = {});

enum class DiagVerdict { UnitarilyDiagonalizable, NotDiagonalizable, Inconclusive };
const char* to_string(DiagVerdict v);

struct DiagReport {
    DiagVerdict verdict = DiagVerdict::Inconclusive;
    std::optional<CMatrix> T;           // unitary, acting on the moments used (normalized if mu0 > 0)
    std::optional<CMatrix> congruence;  // C with C mu_n C^* diagonal for the raw moments
    std::string witness;
    bool mu0_positive = false;
    bool condition_i = false;   // Delta_0 > 0 and [mu_2, mu_1] = 0 after normalization
    bool condition_ii = false;  // Delta_2 > 0
    bool delta2_positive = false;
    double max_offdiag = 0.0;   // relative, over n <= n_test
    std::size_t n_test = 0;
};

DiagReport diagonalizability_report(const Functional& u, const Tolerance& tol = {}, std::size_t n_test = 10);

struct GuardVerdict {
    bool consistent = false;  // Delta_2 is not positive definite
    std::string detail;
    std::vector<Definiteness> delta;  // Delta_0..Delta_2
};

// Requires a double root of alpha; PreconditionViolated otherwise.
GuardVerdict bessel_positivity_guard(const ZeroClassSpec& spec, const Functional& u, const Tolerance& tol = {});
GuardVerdict bessel_positivity_guard(const ZeroClassSpec& spec, const Tolerance& tol = {});

}  // namespace mopkit
