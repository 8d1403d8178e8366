#include "mopkit/functional.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mopkit/errors.hpp"

namespace mopkit {

// ---- PearsonSpec -------------------------------------------------------------

PearsonSpec::PearsonSpec(MatrixPolynomial phi, MatrixPolynomial psi, CMatrix mu0_)
    : Phi(std::move(phi)), Psi(std::move(psi)), mu0(std::move(mu0_)) {
    if (mu0.rows() != mu0.cols()) throw DimensionMismatch("mu0 must be square");
    if (Phi.dim() != mu0.rows() || Psi.dim() != mu0.rows())
        throw DimensionMismatch("Phi, Psi and mu0 dims disagree");
}

CMatrix PearsonSpec::M(long n) const { return psi(1) + static_cast<double>(n) * phi(2); }

bool PearsonSpec::generates_moments() const {
    return Phi.size() <= 3 && Psi.size() <= 2;
}

void PearsonSpec::require_nondegenerate(const Tolerance& tol) const {
    const auto da = poly_det_adj(Phi);
    double big = 0.0;
    for (const auto& c : da.det.coeffs()) big = std::max(big, std::abs(c(0, 0)));
    const double scale = std::pow(std::max(Phi.norm(), tol.abs), static_cast<double>(dim()));
    if (!(big > tol.rel * scale)) throw InvalidParameter("det Phi vanishes identically");
}

const char* to_string(SourceKind k) {
    switch (k) {
        case SourceKind::ExplicitMoments: return "explicit moments";
        case SourceKind::PearsonGenerated: return "Pearson generated";
        case SourceKind::WeightOracle: return "weight oracle";
        case SourceKind::Derived: return "derived";
    }
    return "?";
}

// ---- Functional --------------------------------------------------------------

struct Functional::State {
    Index dim = 1;
    SourceKind kind = SourceKind::ExplicitMoments;
    std::string label;
    Generator gen;
    std::optional<PearsonSpec> spec;
    Tolerance tol;
    std::vector<CMatrix> cache;
    std::optional<std::size_t> bound;
    std::optional<std::size_t> blocked;
};

Functional::Functional(std::shared_ptr<State> s) : s_(std::move(s)) {}

Functional Functional::from_moments(std::vector<CMatrix> moments) {
    if (moments.empty()) throw InvalidParameter("explicit functional needs at least mu_0");
    auto s = std::make_shared<State>();
    s->dim = moments[0].rows();
    for (const auto& m : moments)
        if (m.rows() != s->dim || m.cols() != s->dim) throw DimensionMismatch("moment shapes differ");
    s->kind = SourceKind::ExplicitMoments;
    s->label = "explicit";
    s->bound = moments.size() - 1;
    s->cache = std::move(moments);
    return Functional(std::move(s));
}

Functional Functional::from_pearson(PearsonSpec spec, Tolerance tol) {
    if (!spec.generates_moments())
        throw InvalidParameter("moment generation needs deg Phi <= 2 and deg Psi <= 1");
    auto s = std::make_shared<State>();
    s->dim = spec.dim();
    s->kind = SourceKind::PearsonGenerated;
    s->label = "pearson";
    s->cache.push_back(spec.mu0);
    s->spec = std::move(spec);
    s->tol = tol;
    return Functional(std::move(s));
}

Functional Functional::from_oracle(Index dim, std::string label, Generator g) {
    auto s = std::make_shared<State>();
    s->dim = dim;
    s->kind = SourceKind::WeightOracle;
    s->label = std::move(label);
    s->gen = std::move(g);
    return Functional(std::move(s));
}

Functional Functional::derived(Index dim, std::string label, Generator g) {
    Functional f = from_oracle(dim, std::move(label), std::move(g));
    f.s_->kind = SourceKind::Derived;
    return f;
}

Index Functional::dim() const { return s_->dim; }
SourceKind Functional::kind() const { return s_->kind; }
const std::string& Functional::label() const { return s_->label; }
const std::optional<PearsonSpec>& Functional::pearson() const { return s_->spec; }
std::size_t Functional::cached() const { return s_->cache.size(); }
std::optional<std::size_t> Functional::horizon() const { return s_->bound; }

void Functional::warm(std::size_t n) const {
    auto& st = *s_;
    if (n < st.cache.size()) return;
    switch (st.kind) {
        case SourceKind::ExplicitMoments:
            throw MomentUnavailable("moment " + std::to_string(n) + " beyond the explicit list (" +
                                    std::to_string(st.cache.size()) + " given)");
        case SourceKind::WeightOracle:
        case SourceKind::Derived:
            while (st.cache.size() <= n) {
                CMatrix m = st.gen(st.cache.size());
                if (m.rows() != st.dim || m.cols() != st.dim)
                    throw DimensionMismatch("generator returned a moment of the wrong shape");
                if (!m.allFinite())
                    throw MomentUnavailable("moment " + std::to_string(st.cache.size()) + " of " + st.label + " is not finite");
                st.cache.push_back(std::move(m));
            }
            return;
        case SourceKind::PearsonGenerated: {
            const PearsonSpec& sp = *st.spec;
            while (st.cache.size() <= n) {
                const std::size_t k = st.cache.size() - 1;  // solve for mu_{k+1}
                if (st.blocked && *st.blocked == k)
                    throw RecurrenceBlocked("M_" + std::to_string(k) + " singular", k);
                const double kd = static_cast<double>(k);
                CMatrix rhs = st.cache[k] * (sp.psi(0) + kd * sp.phi(1));
                if (k > 0) rhs += kd * st.cache[k - 1] * sp.phi(0);
                try {
                    st.cache.push_back(solve_right(sp.M(static_cast<long>(k)), -rhs, st.tol));
                } catch (const SingularSystem&) {
                    st.blocked = k;
                    throw RecurrenceBlocked("M_" + std::to_string(k) +
                                                " = psi_1 + k phi_2 is singular; mu_" +
                                                std::to_string(k + 1) + " is not determined",
                                            k);
                }
            }
            return;
        }
    }
}

CMatrix Functional::moment(std::size_t n) const {
    warm(n);
    return s_->cache[n];
}

std::vector<CMatrix> Functional::moments(std::size_t upto) const {
    warm(upto);
    return {s_->cache.begin(), s_->cache.begin() + static_cast<std::ptrdiff_t>(upto + 1)};
}

// ---- algebra -----------------------------------------------------------------

namespace {

void require_dim(const Functional& u, const MatrixPolynomial& Q) {
    if (u.dim() != Q.dim()) throw DimensionMismatch("functional and polynomial dims differ");
}

}  // namespace

Functional right_multiply(const Functional& u, const MatrixPolynomial& Q) {
    require_dim(u, Q);
    return Functional::derived(u.dim(), u.label() + "*Q", [u, Q](std::size_t n) {
        CMatrix acc = CMatrix::Zero(u.dim(), u.dim());
        for (std::size_t k = 0; k < Q.size(); ++k) acc += u.moment(n + k) * Q.coeffs()[k];
        return acc;
    });
}

Functional left_multiply(const Functional& u, const MatrixPolynomial& Q) {
    require_dim(u, Q);
    return Functional::derived(u.dim(), "Q*" + u.label(), [u, Q](std::size_t n) {
        CMatrix acc = CMatrix::Zero(u.dim(), u.dim());
        for (std::size_t k = 0; k < Q.size(); ++k) acc += Q.coeffs()[k] * u.moment(n + k);
        return acc;
    });
}

Functional derivative(const Functional& u) {
    return Functional::derived(u.dim(), "D" + u.label(), [u](std::size_t n) -> CMatrix {
        if (n == 0) return CMatrix::Zero(u.dim(), u.dim());
        return -static_cast<double>(n) * u.moment(n - 1);
    });
}

Functional adjoint(const Functional& u) {
    return Functional::derived(u.dim(), u.label() + "^*",
                               [u](std::size_t n) -> CMatrix { return u.moment(n).adjoint(); });
}

Functional change_of_variable(const Functional& u, cplx a, cplx b) {
    if (a == cplx(0)) throw InvalidTransform("change of variable needs a != 0");
    return Functional::derived(u.dim(), u.label() + "_t", [u, a, b](std::size_t n) {
        CMatrix acc = CMatrix::Zero(u.dim(), u.dim());
        // powers by multiplication: std::pow(complex 0, 0) is NaN
        std::vector<cplx> ap(n + 1, 1.0), bp(n + 1, 1.0);
        for (std::size_t k = 1; k <= n; ++k) {
            ap[k] = ap[k - 1] * a;
            bp[k] = bp[k - 1] * b;
        }
        double binom = 1.0;  // C(n, k)
        for (std::size_t k = 0; k <= n; ++k) {
            acc += binom * ap[k] * bp[n - k] * u.moment(k);
            binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
        }
        return acc;
    });
}

Functional equivalence(const Functional& u, const CMatrix& T, const CMatrix& S, const Tolerance& tol) {
    if (T.rows() != u.dim() || S.rows() != u.dim()) throw DimensionMismatch("transform dims differ");
    if (!is_nonsingular(T, tol) || !is_nonsingular(S, tol))
        throw InvalidTransform("equivalence needs nonsingular T and S");
    return Functional::derived(u.dim(), "T" + u.label() + "S",
                               [u, T, S](std::size_t n) -> CMatrix { return T * u.moment(n) * S; });
}

Functional congruence(const Functional& u, const CMatrix& T, const Tolerance& tol) {
    return equivalence(u, T, T.adjoint(), tol);
}

std::pair<Functional, CMatrix> normalize(const Functional& u) {
    const CMatrix mu0 = u.moment(0);
    Eigen::LLT<CMatrix> llt(0.5 * (mu0 + mu0.adjoint()));
    if (llt.info() != Eigen::Success) throw HypothesisViolated("mu_0 is not positive definite");
    const CMatrix L = llt.matrixL();
    const CMatrix Li = L.inverse();
    Functional uh = Functional::derived(u.dim(), u.label() + "^",
                                        [u, Li](std::size_t n) -> CMatrix { return Li * u.moment(n) * Li.adjoint(); });
    return {uh, L};
}

CMatrix bracket(const MatrixPolynomial& P, const Functional& u) {
    require_dim(u, P);
    CMatrix acc = CMatrix::Zero(u.dim(), u.dim());
    for (std::size_t i = 0; i < P.size(); ++i) acc += P.coeffs()[i] * u.moment(i);
    return acc;
}

CMatrix inner(const MatrixPolynomial& P, const MatrixPolynomial& Q, const Functional& u) {
    return bracket(P, right_multiply(u, Q.adjoint()));
}

BlockMatrix hankel_blocks(const Functional& u, std::size_t n) {
    BlockMatrix H(n + 1, std::vector<CMatrix>(n + 1));
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) H[i][j] = u.moment(i + j);
    return H;
}

CMatrix hankel(const Functional& u, std::size_t n) { return flatten(hankel_blocks(u, n)); }

bool HankelProfile::all_nonsingular() const {
    for (const auto& f : flags)
        if (!f.nonsingular) return false;
    return true;
}

bool HankelProfile::all_positive_definite() const {
    for (const auto& f : flags)
        if (!f.positive_definite) return false;
    return true;
}

HankelProfile hankel_profile(const Functional& u, std::size_t n, const Tolerance& tol) {
    HankelProfile hp;
    hp.order = n;
    for (std::size_t k = 0; k <= n; ++k) {
        const BlockMatrix H = hankel_blocks(u, k);
        HankelFlags f;
        const auto e = analyze_blocks(H, tol);
        f.cond_estimate = e.cond_estimate;
        f.nonsingular = !e.singular;
        CMatrix D = flatten(H);
        const auto d = psd_check(D, tol);
        f.hermitian = d != Definiteness::NonHermitian;
        f.positive_definite = d == Definiteness::PositiveDefinite && f.nonsingular;
        hp.delta.push_back(std::move(D));
        hp.flags.push_back(f);
    }
    return hp;
}

namespace {

struct ResidualParts {
    CMatrix value;
    double scale = 0.0;
};

ResidualParts residual_parts(const Functional& u, const MatrixPolynomial& Phi, const MatrixPolynomial& Psi,
                             std::size_t n) {
    ResidualParts r{CMatrix::Zero(u.dim(), u.dim()), 0.0};
    if (n > 0)
        for (std::size_t i = 0; i < Phi.size(); ++i) {
            const CMatrix t = static_cast<double>(n) * u.moment(n + i - 1) * Phi.coeffs()[i];
            r.value += t;
            r.scale += t.norm();
        }
    for (std::size_t j = 0; j < Psi.size(); ++j) {
        const CMatrix t = u.moment(n + j) * Psi.coeffs()[j];
        r.value += t;
        r.scale += t.norm();
    }
    return r;
}

}  // namespace

CMatrix pearson_residual(const Functional& u, const MatrixPolynomial& Phi, const MatrixPolynomial& Psi,
                         std::size_t n) {
    return residual_parts(u, Phi, Psi, n).value;
}

double pearson_certificate(const Functional& u, const MatrixPolynomial& Phi, const MatrixPolynomial& Psi,
                           std::size_t N) {
    double worst = 0.0;
    for (std::size_t n = 0; n <= N; ++n) {
        const auto r = residual_parts(u, Phi, Psi, n);
        if (!std::isfinite(r.scale) || !r.value.allFinite()) return std::numeric_limits<double>::quiet_NaN();
        if (r.scale > 0) worst = std::max(worst, r.value.norm() / r.scale);
    }
    return worst;
}

}  // namespace mopkit
