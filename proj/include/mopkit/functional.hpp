#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mopkit/dense.hpp"
#include "mopkit/matrix_polynomial.hpp"

namespace mopkit {

// D(u Phi) = u Psi together with the seed moment mu_0. Moment generation needs
// deg Phi <= 2 and deg Psi <= 1; higher degrees are accepted for residual checks.
struct PearsonSpec {
    MatrixPolynomial Phi;
    MatrixPolynomial Psi;
    CMatrix mu0;

    PearsonSpec(MatrixPolynomial phi, MatrixPolynomial psi, CMatrix mu0);

    Index dim() const { return mu0.rows(); }
    CMatrix phi(std::size_t i) const { return Phi.coeff(i); }
    CMatrix psi(std::size_t j) const { return Psi.coeff(j); }
    // M_n = psi_1 + n phi_2
    CMatrix M(long n) const;
    bool generates_moments() const;
    // Throws InvalidParameter if det Phi vanishes identically (relative to tol.rel).
    void require_nondegenerate(const Tolerance& tol = {}) const;
};

enum class SourceKind { ExplicitMoments, PearsonGenerated, WeightOracle, Derived };
const char* to_string(SourceKind k);

// A matrix functional, carried by its moments mu_n = <x^n I, u>. Copies share one
// grow-only cache; growing it is not synchronized, so warm() before sharing across threads.
class Functional {
public:
    using Generator = std::function<CMatrix(std::size_t)>;

    static Functional from_moments(std::vector<CMatrix> moments);
    static Functional from_pearson(PearsonSpec spec, Tolerance tol = {});
    static Functional from_oracle(Index dim, std::string label, Generator g);
    static Functional derived(Index dim, std::string label, Generator g);

    Index dim() const;
    SourceKind kind() const;
    const std::string& label() const;
    const std::optional<PearsonSpec>& pearson() const;

    CMatrix moment(std::size_t n) const;
    std::vector<CMatrix> moments(std::size_t upto) const;  // mu_0 .. mu_upto
    void warm(std::size_t n) const;
    std::size_t cached() const;
    // Largest n with mu_n obtainable (explicit list length - 1), if bounded.
    std::optional<std::size_t> horizon() const;

private:
    struct State;
    explicit Functional(std::shared_ptr<State> s);
    std::shared_ptr<State> s_;
};

// nu_n = sum_k mu_{n+k} q_k
Functional right_multiply(const Functional& u, const MatrixPolynomial& Q);
// nu_n = sum_k q_k mu_{n+k}
Functional left_multiply(const Functional& u, const MatrixPolynomial& Q);
// nu_n = -n mu_{n-1}
Functional derivative(const Functional& u);
// nu_n = mu_n^*
Functional adjoint(const Functional& u);
// <P, u_t> = <P o t, u> with t(x) = a x + b
Functional change_of_variable(const Functional& u, cplx a, cplx b);
// nu_n = T mu_n S
Functional equivalence(const Functional& u, const CMatrix& T, const CMatrix& S, const Tolerance& tol = {});
Functional congruence(const Functional& u, const CMatrix& T, const Tolerance& tol = {});
// u-hat = L^{-1} u L^{-*} where mu_0 = L L^*; also returns L.
std::pair<Functional, CMatrix> normalize(const Functional& u);

// <P, u> = sum_i p_i mu_i
CMatrix bracket(const MatrixPolynomial& P, const Functional& u);
// <P, u Q^*>
CMatrix inner(const MatrixPolynomial& P, const MatrixPolynomial& Q, const Functional& u);

// Block Hankel Delta_n with blocks mu_{i+j}, 0 <= i, j <= n.
BlockMatrix hankel_blocks(const Functional& u, std::size_t n);
CMatrix hankel(const Functional& u, std::size_t n);

struct HankelFlags {
    bool nonsingular = false;
    bool hermitian = false;
    bool positive_definite = false;
    double cond_estimate = 0.0;
};

struct HankelProfile {
    std::size_t order = 0;
    std::vector<CMatrix> delta;
    std::vector<HankelFlags> flags;

    bool all_nonsingular() const;
    bool all_positive_definite() const;
};

HankelProfile hankel_profile(const Functional& u, std::size_t n, const Tolerance& tol = {});

// n sum_i mu_{n+i-1} phi_i + sum_j mu_{n+j} psi_j  (zero when D(u Phi) = u Psi holds at order n)
CMatrix pearson_residual(const Functional& u, const MatrixPolynomial& Phi, const MatrixPolynomial& Psi,
                         std::size_t n);
// Max over n <= N of |residual| / (sum of the norms of its terms).
double pearson_certificate(const Functional& u, const MatrixPolynomial& Phi, const MatrixPolynomial& Psi,
                           std::size_t N);

}  // namespace mopkit
