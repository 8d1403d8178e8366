#include "mopkit/zeroclass.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mopkit/errors.hpp"

namespace mopkit {

namespace {

// relative threshold for "these moment matrices commute / are diagonal"
constexpr double kStructRel = 1e-8;

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

double rel_norm(const CMatrix& r, std::initializer_list<double> terms) {
    double s = 0.0;
    for (double t : terms) s += t;
    return r.norm() / std::max(s, 1e-300);
}

CMatrix inv_or_block(const CMatrix& A, const Tolerance& tol, const std::string& what, std::size_t index) {
    try {
        return inverse(A, tol);
    } catch (const SingularSystem&) {
        throw ClosedFormBlocked(what + " is singular", index);
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace

ZeroClassSpec::ZeroClassSpec(std::array<cplx, 3> a, CMatrix p0, CMatrix p1, CMatrix m0)
    : alpha(a), psi0(std::move(p0)), psi1(std::move(p1)), mu0(std::move(m0)) {
    const Index m = mu0.rows();
    if (mu0.cols() != m || psi0.rows() != m || psi0.cols() != m || psi1.rows() != m || psi1.cols() != m)
        throw DimensionMismatch("zero-class spec blocks must all be m x m");
    if (alpha[0] == 0.0 && alpha[1] == 0.0 && alpha[2] == 0.0) throw InvalidParameter("alpha is identically zero");
}

ZeroClassSpec ZeroClassSpec::from_pearson(const PearsonSpec& spec, const Tolerance& tol) {
    if (spec.Phi.degree().value_or(0) > 2 || spec.Psi.degree().value_or(0) > 1)
        throw InvalidParameter("zero class needs deg Phi <= 2 and deg Psi <= 1");
    const Index m = spec.dim();
    std::array<cplx, 3> a{};
    for (std::size_t i = 0; i < 3; ++i) {
        CMatrix c = spec.phi(i);
        a[i] = c(0, 0);
        if ((c - a[i] * identity(m)).norm() > tol.abs + tol.rel * c.norm())
            throw InvalidParameter("Phi is not a scalar multiple of the identity");
    }
    return ZeroClassSpec(a, spec.psi(0), spec.psi(1), spec.mu0);
}

MatrixPolynomial ZeroClassSpec::alpha_poly() const {
    return MatrixPolynomial::scalar({alpha[0], alpha[1], alpha[2]}, 1);
}

MatrixPolynomial ZeroClassSpec::Psi() const { return MatrixPolynomial(dim(), {psi0, psi1}); }

PearsonSpec ZeroClassSpec::to_pearson() const {
    return PearsonSpec(MatrixPolynomial::scalar({alpha[0], alpha[1], alpha[2]}, dim()), Psi(), mu0);
}

CMatrix alpha_at(const std::array<cplx, 3>& a, const CMatrix& X) {
    return a[0] * identity(X.rows()) + a[1] * X + a[2] * X * X;
}

Ladders::Ladders(ZeroClassSpec spec, Tolerance tol) : spec_(std::move(spec)), tol_(tol) {}

CMatrix Ladders::M(long n) const {
    return spec_.psi1 + static_cast<double>(n) * spec_.alpha[2] * identity(spec_.dim());
}

CMatrix Ladders::N(long n) const {
    return spec_.psi0 + static_cast<double>(n) * spec_.alpha[1] * identity(spec_.dim());
}

bool Ladders::M_nonsingular(long n) const { return is_nonsingular(M(n), tol_); }

const CMatrix& Ladders::V(long n) {
    auto it = V_.find(n);
    if (it != V_.end()) return it->second;
    CMatrix v = identity(spec_.dim());
    if (n >= 0) {
        for (long k = n; k <= 2 * n + 1; ++k) v = v * M(k);
    }
    return V_.emplace(n, std::move(v)).first->second;
}

const CMatrix& Ladders::X(long n) {
    auto it = X_.find(n);
    if (it != X_.end()) return it->second;
    CMatrix x;
    try {
        x = solve_right(M(2 * n), -N(n), tol_);
    } catch (const SingularSystem&) {
        throw ClosedFormBlocked("M_" + std::to_string(2 * n) + " is singular", static_cast<std::size_t>(2 * n));
    }
    return X_.emplace(n, std::move(x)).first->second;
}

const CMatrix& Ladders::alphaeval(long n) {
    auto it = A_.find(n);
    if (it != A_.end()) return it->second;
    CMatrix a = alpha_at(spec_.alpha, X(n));
    return A_.emplace(n, std::move(a)).first->second;
}

ExistenceReport existence_check(const ZeroClassSpec& spec, std::size_t n_max, const Tolerance& tol) {
    tol.validate();
    Ladders L(spec, tol);
    ExistenceReport rep;
    rep.n_max = n_max;
    rep.quasi_definite = true;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const long j = static_cast<long>(n) - 1;
        if (!L.M_nonsingular(2 * j)) {
            rep.blocked_index = static_cast<std::size_t>(2 * j);
            rep.reason = "M_" + std::to_string(2 * j) + " is singular";
        } else if (!is_nonsingular(L.alphaeval(j), tol)) {
            rep.blocked_index = static_cast<std::size_t>(j);
            rep.reason = "alpha(-N_" + std::to_string(j) + " M_" + std::to_string(2 * j) + "^{-1}) is singular";
        } else if (!L.M_nonsingular(2 * j + 1)) {
            rep.blocked_index = static_cast<std::size_t>(2 * j + 1);
            rep.reason = "M_" + std::to_string(2 * j + 1) + " is singular";
        }
        if (rep.blocked_index) {
            rep.quasi_definite = false;
            break;
        }
        rep.segment_degree = n;
    }

    if (is_nonsingular(spec.mu0, tol)) {
        Functional u = Functional::from_pearson(spec.to_pearson(), tol);
        SegmentOptions opts;
        opts.truncate_on_blocked_recurrence = true;
        MonicSegment seg = compute_segment(u, n_max, tol, opts);
        rep.cross_checked = true;
        rep.hankel_degree = seg.length() - 1;
        rep.hankel_reason = seg.reason;
        rep.agrees = rep.hankel_degree == rep.segment_degree;
    }
    return rep;
}

namespace {

// E_0 of u^{(j)}: mu_0 alpha(X_0) M_0 M_1^{-1} ... alpha(X_{j-1}) M_{2j-2} M_{2j-1}^{-1}
CMatrix e0_level(Ladders& L, std::size_t j, const Tolerance& tol) {
    CMatrix e = L.spec().mu0;
    for (std::size_t i = 0; i < j; ++i) {
        const long k = static_cast<long>(i);
        e = e * L.alphaeval(k) * L.M(2 * k) *
            inv_or_block(L.M(2 * k + 1), tol, "M_" + std::to_string(2 * k + 1), static_cast<std::size_t>(2 * k + 1));
    }
    return e;
}

}  // namespace

CMatrix closed_form_E(Ladders& L, std::size_t n) {
    const Tolerance tol;
    if (n == 0) return L.spec().mu0;
    const long j = static_cast<long>(n) - 1;
    CMatrix e0 = e0_level(L, n - 1, tol);
    CMatrix Vinv = inv_or_block(L.V(j), tol, "V_" + std::to_string(j), static_cast<std::size_t>(j));
    const double sign = (n % 2) ? -1.0 : 1.0;
    return sign * factorial(n) * e0 * L.alphaeval(j) * L.M(2 * j) * Vinv;
}

CMatrix closed_form_pi(Ladders& L, std::size_t n) {
    const Tolerance tol;
    const Index m = L.spec().dim();
    if (n == 0) return zeros(m);
    const long j = static_cast<long>(n) - 1;
    CMatrix e0 = e0_level(L, n - 1, tol);
    CMatrix Minv = inv_or_block(L.M(2 * j), tol, "M_" + std::to_string(2 * j), static_cast<std::size_t>(2 * j));
    CMatrix e0inv = inv_or_block(e0, tol, "E_0 of level " + std::to_string(j), static_cast<std::size_t>(j));
    return static_cast<double>(n) * e0 * L.N(j) * Minv * e0inv;
}

ClosedFormRatios closed_form_ratios(Ladders& L, std::size_t n) {
    const Tolerance tol;
    const Index m = L.spec().dim();
    const long nl = static_cast<long>(n);
    ClosedFormRatios out;
    const CMatrix& Vp = L.V(nl - 1);
    CMatrix Vpinv = inv_or_block(Vp, tol, "V_" + std::to_string(nl - 1), n);
    if (n == 0) {
        out.Pi = zeros(m);
    } else {
        CMatrix Minv = inv_or_block(L.M(2 * nl - 2), tol, "M_" + std::to_string(2 * nl - 2),
                                    static_cast<std::size_t>(2 * nl - 2));
        out.Pi = static_cast<double>(n) * Vp * Minv * L.N(nl - 1) * Vpinv;
    }
    CMatrix Vninv = inv_or_block(L.V(nl), tol, "V_" + std::to_string(nl), n);
    if (n == 0) {
        // the leading V_{-1} M_{-1}^{-1} is the empty product here (V_n = M_n ... M_{2n+1} gives
        // V_{-1} = M_{-1}), unlike the V_{-1} = I that the E_n product needs
        out.ratio = -L.alphaeval(0) * L.M(0) * Vninv;
        return out;
    }
    CMatrix M1inv = inv_or_block(L.M(2 * nl - 1), tol, "M_" + std::to_string(2 * nl - 1),
                                 static_cast<std::size_t>(2 * nl - 1));
    out.ratio = -static_cast<double>(n + 1) * Vp * M1inv * L.alphaeval(nl) * L.M(2 * nl) * Vninv;
    return out;
}

const char* to_string(CanonicalTag t) {
    switch (t) {
        case CanonicalTag::Hermite: return "Hermite";
        case CanonicalTag::Laguerre: return "Laguerre";
        case CanonicalTag::Jacobi: return "Jacobi";
        case CanonicalTag::Bessel: return "Bessel";
    }
    return "?";
}

CanonicalType canonical_type(const ZeroClassSpec& spec, const Tolerance& tol) {
    const auto& a = spec.alpha;
    const double amax = std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
    const auto is_real = [&](cplx z) { return std::abs(z.imag()) <= tol.rel * std::max(1.0, std::abs(z)); };
    CanonicalType ct;
    if (std::abs(a[2]) <= tol.rel * amax) {
        if (std::abs(a[1]) <= tol.rel * amax) {
            ct.tag = CanonicalTag::Hermite;
            ct.kappa = a[0];
            return ct;
        }
        ct.tag = CanonicalTag::Laguerre;
        cplx x0 = -a[0] / a[1];
        ct.roots = {x0};
        ct.b = -x0;
        ct.kappa = a[1];
        ct.real_roots = is_real(x0);
        return ct;
    }
    const cplx disc = a[1] * a[1] - 4.0 * a[0] * a[2];
    if (std::abs(disc) <= tol.rel * amax * amax) {
        ct.tag = CanonicalTag::Bessel;
        cplx r = -a[1] / (2.0 * a[2]);
        ct.roots = {r, r};
        ct.b = -r;
        ct.kappa = a[2];
        ct.real_roots = is_real(r);
        return ct;
    }
    ct.tag = CanonicalTag::Jacobi;
    const cplx sq = std::sqrt(disc);
    cplx r1 = (-a[1] - sq) / (2.0 * a[2]);
    cplx r2 = (-a[1] + sq) / (2.0 * a[2]);
    ct.real_roots = is_real(r1) && is_real(r2);
    if (ct.real_roots && r1.real() > r2.real()) std::swap(r1, r2);
    ct.roots = {r1, r2};
    ct.a = 2.0 / (r2 - r1);
    ct.b = -(r1 + r2) / (r2 - r1);
    ct.kappa = -a[2] * (r2 - r1) * (r2 - r1) / 4.0;
    return ct;
}

ZeroClassSpec canonical_spec(const ZeroClassSpec& spec, const CanonicalType& ct, bool allow_complex) {
    const bool real_map = std::abs(ct.a.imag()) == 0.0 && std::abs(ct.b.imag()) <= 1e-14 * std::abs(ct.b);
    if ((!ct.real_roots || !real_map) && !allow_complex)
        throw InvalidTransform("canonical change of variable is complex; pass allow_complex to apply it");
    std::array<cplx, 3> canon{};
    switch (ct.tag) {
        case CanonicalTag::Hermite: canon = {1.0, 0.0, 0.0}; break;
        case CanonicalTag::Laguerre: canon = {0.0, 1.0, 0.0}; break;
        case CanonicalTag::Jacobi: canon = {1.0, 0.0, -1.0}; break;
        case CanonicalTag::Bessel: canon = {0.0, 0.0, 1.0}; break;
    }
    // D(u_t c I) = (1/(kappa a)) u_t Psi(t^{-1}(y)),  t^{-1}(y) = (y - b)/a
    const cplx s = 1.0 / (ct.kappa * ct.a);
    CMatrix p1 = s * spec.psi1 / ct.a;
    CMatrix p0 = s * (spec.psi0 - spec.psi1 * (ct.b / ct.a));
    return ZeroClassSpec(canon, p0, p1, spec.mu0);
}

MatrixPolynomial ode_apply(const OdeTriple& ode, const MatrixPolynomial& P) {
    MatrixPolynomial d1 = P.derivative(), d2 = d1.derivative();
    if (ode.right_sided) return d2 * ode.a2 + d1 * ode.a1 + ode.a0 * P;
    return ode.a2 * d2 + ode.a1 * d1 + ode.a0 * P;
}

namespace {

double ode_residual(const OdeTriple& ode, const MatrixPolynomial& P) {
    MatrixPolynomial d1 = P.derivative(), d2 = d1.derivative();
    double t2 = ode.right_sided ? (d2 * ode.a2).norm() : (ode.a2 * d2).norm();
    double t1 = ode.right_sided ? (d1 * ode.a1).norm() : (ode.a1 * d1).norm();
    double t0 = (ode.a0 * P).norm();
    double scale = std::max({P.norm(), t2, t1, t0, 1e-300});
    return ode_apply(ode, P).norm() / scale;
}

bool moments_hermitian(const Functional& u, std::size_t upto, const Tolerance& tol, std::string* which) {
    bool ok = true;
    for (std::size_t k = 0; k <= upto; ++k) {
        if (!is_hermitian(u.moment(k), Tolerance{kStructRel, tol.abs, tol.cond_max})) {
            ok = false;
            if (which) *which += (which->empty() ? "mu_" : ", mu_") + std::to_string(k);
        }
    }
    return ok;
}

}  // namespace

OdeTriple right_ode(const PearsonSpec& spec, const Functional& u, const MonicSegment& seg, std::size_t n,
                    const Tolerance& tol) {
    if (n >= seg.length()) throw PreconditionViolated("segment too short for n = " + std::to_string(n));
    const std::size_t upto = 2 * n + 2;
    std::string bad;
    if (!moments_hermitian(u, upto, tol, &bad)) throw HermiticityRequired("u is not hermitian: " + bad);
    std::string badphi;
    Functional uphi = right_multiply(u, spec.Phi);
    if (!moments_hermitian(uphi, upto, tol, &badphi)) throw HermiticityRequired("u Phi is not hermitian: " + badphi);
    OdeTriple ode;
    ode.right_sided = true;
    ode.a2 = spec.Phi.adjoint();
    ode.a1 = spec.Psi.adjoint();
    ode.a0 = MatrixPolynomial::constant(-static_cast<double>(n) * spec.M(static_cast<long>(n) - 1).adjoint());
    ode.residual = ode_residual(ode, seg.polys[n]);
    return ode;
}

OdeReport ode_coefficients(Ladders& L, const Functional& u, const MonicSegment& seg, std::size_t n,
                           const Tolerance& tol) {
    if (n >= seg.length()) throw PreconditionViolated("segment too short for n = " + std::to_string(n));
    const ZeroClassSpec& s = L.spec();
    const Index m = s.dim();
    const long nl = static_cast<long>(n);
    const CMatrix& En = seg.E[n];
    CMatrix C = En * L.V(nl - 1);
    CMatrix Cinv = inverse(C, tol);
    CMatrix Einv = inverse(En, tol);

    OdeReport rep;
    rep.n = n;
    const MatrixPolynomial a = MatrixPolynomial::scalar({s.alpha[0], s.alpha[1], s.alpha[2]}, m);
    rep.L1.a2 = a;
    rep.L1.a1 = s.Psi().left(C).right(Cinv);
    rep.L1.a0 = MatrixPolynomial::constant(-static_cast<double>(n) * En * L.M(nl - 1) * Einv);
    rep.L1.residual = ode_residual(rep.L1, seg.polys[n]);

    rep.L2.a2 = a;
    rep.L2.a1 = s.Psi();
    rep.L2.a0 = MatrixPolynomial::constant(-static_cast<double>(n) * L.M(nl - 1));
    rep.L2.residual = ode_residual(rep.L2, seg.polys[n].left(Cinv));

    try {
        rep.R = right_ode(s.to_pearson(), u, seg, n, tol);
    } catch (const HermiticityRequired& e) {
        rep.R_skipped = e.what();
    }
    return rep;
}

CMatrix kappa(Ladders& L, std::size_t n) {
    const Tolerance tol;
    CMatrix EV = closed_form_E(L, n) * L.V(static_cast<long>(n) - 1);
    return inv_or_block(EV, tol, "E_n V_{n-1}", n);
}

MatrixPolynomial ode_solve(Ladders& L, std::size_t n, const CMatrix& leading) {
    const Tolerance tol;
    const ZeroClassSpec& s = L.spec();
    const Index m = s.dim();
    std::vector<CMatrix> c(n + 3, zeros(m));
    c[n] = leading;
    for (std::size_t kk = n; kk-- > 0;) {
        const long k = static_cast<long>(kk);
        CMatrix rhs = static_cast<double>(kk + 1) *
                      (L.N(k) * c[kk + 1] + static_cast<double>(kk + 2) * s.alpha[0] * c[kk + 2]);
        try {
            c[kk] = solve_left(L.M(k + static_cast<long>(n) - 1), rhs, tol) / static_cast<double>(n - kk);
        } catch (const SingularSystem&) {
            throw OdeSolveBlocked("M_" + std::to_string(k + static_cast<long>(n) - 1) + " is singular", kk);
        }
    }
    c.resize(n + 1);
    return MatrixPolynomial(m, std::move(c));
}

StructureRelation structure_relation(const ZeroClassSpec& spec, const MonicSegment& seg, const Tolerance& tol) {
    const Index m = spec.dim();
    Ladders L(spec, tol);
    const auto& a = spec.alpha;
    const MatrixPolynomial alpha = MatrixPolynomial::scalar({a[0], a[1], a[2]}, m);
    StructureRelation out;
    out.eta.assign(1, zeros(m));
    out.theta.assign(1, zeros(m));
    out.residual.assign(1, 0.0);
    out.sigma_residual.assign(1, 0.0);
    const std::size_t last = seg.next ? seg.length() - 1 : seg.length() - 2;
    for (std::size_t n = 1; n <= last && n + 1 <= seg.length(); ++n) {
        const long nl = static_cast<long>(n);
        const double nd = static_cast<double>(n);
        const MatrixPolynomial& Pn1 = seg.poly_or_next(n + 1);
        const CMatrix pin1 = Pn1.coeff(n);
        CMatrix eta = nd * a[1] * identity(m) + ((nd - 1.0) * seg.pi[n] - nd * pin1) * a[2];
        CMatrix Eprev_inv = inverse(seg.E[n - 1], tol);
        CMatrix theta = -seg.E[n] * L.M(nl - 1) * Eprev_inv;
        MatrixPolynomial lhs = alpha * seg.polys[n].derivative();
        MatrixPolynomial t1 = (nd * a[2]) * Pn1;
        MatrixPolynomial t2 = seg.polys[n].left(eta);
        MatrixPolynomial t3 = seg.polys[n - 1].left(theta);
        MatrixPolynomial r = lhs - t1 - t2 - t3;
        double scale = lhs.norm() + t1.norm() + t2.norm() + t3.norm();
        out.eta.push_back(eta);
        out.theta.push_back(theta);
        out.residual.push_back(r.norm() / std::max(scale, 1e-300));
        out.max_residual = std::max(out.max_residual, out.residual.back());

        // Sigma_n assembled from the ladder pieces against n E_n M_{n-1} E_n^{-1}
        CMatrix Einv = inverse(seg.E[n], tol);
        CMatrix M2inv = inverse(L.M(2 * nl - 1), tol);
        CMatrix Splus = (nd + 1.0) * seg.E[n] * M2inv * L.M(nl - 1) * Einv;
        CMatrix Sminus = -nd * seg.E[n - 1] * M2inv * L.M(nl - 2) * Einv;
        CMatrix Sigma = nd * a[2] * Splus + theta * Sminus;
        CMatrix target = nd * seg.E[n] * L.M(nl - 1) * Einv;
        out.sigma_residual.push_back(rel_diff(Sigma, target, tol.abs));
        out.max_sigma_residual = std::max(out.max_sigma_residual, out.sigma_residual.back());
    }
    return out;
}

ObstructionResult hermiticity_obstruction(const Functional& u, const ZeroClassSpec& spec, std::size_t n,
                                          bool corollary, const Tolerance& tol) {
    if (n == 0) throw PreconditionViolated("the identity needs n >= 1");
    std::string bad;
    const std::size_t lo = n >= 2 ? n - 2 : 0;
    for (std::size_t k = lo; k <= n + 2; ++k) {
        if (!is_hermitian(u.moment(k), Tolerance{kStructRel, tol.abs, tol.cond_max}))
            bad += (bad.empty() ? "mu_" : ", mu_") + std::to_string(k);
    }
    if (corollary) {
        if (rel_diff(u.moment(0), identity(spec.dim()), 1.0) > kStructRel) bad += (bad.empty() ? "" : "; ") + std::string("mu_0 != I");
        if (!is_hermitian(u.moment(1), Tolerance{kStructRel, tol.abs, tol.cond_max}))
            bad += (bad.empty() ? "" : "; ") + std::string("mu_1 not hermitian");
    }
    if (!bad.empty()) throw HypothesisViolated("hermiticity hypotheses fail: " + bad);

    const auto& a = spec.alpha;
    const double A0 = (std::conj(a[0]) * a[1]).imag();
    const double A1 = 2.0 * (std::conj(a[0]) * a[2]).imag();
    const double A2 = (std::conj(a[1]) * a[2]).imag();
    const CMatrix mun1 = u.moment(n + 1);
    CMatrix l1, l2;
    if (corollary) {
        const CMatrix mu1 = u.moment(1);
        l1 = spec.psi1.adjoint() * mun1 * mu1 * spec.psi1;
        l2 = spec.psi1.adjoint() * mu1 * mun1 * spec.psi1;
    } else {
        l1 = spec.psi0.adjoint() * mun1 * spec.psi1;
        l2 = spec.psi1.adjoint() * mun1 * spec.psi0;
    }
    const double nd = static_cast<double>(n);
    CMatrix rhs = cplx(0.0, 2.0 * nd * (nd + 1.0)) * (A0 * u.moment(n - 1) + A1 * u.moment(n) + A2 * mun1);
    ObstructionResult out;
    out.corollary_form = corollary;
    out.residual = l1 - l2 - rhs;
    out.relative = rel_norm(out.residual, {l1.norm(), l2.norm(), rhs.norm(), tol.abs});
    return out;
}

const char* to_string(DiagVerdict v) {
    switch (v) {
        case DiagVerdict::UnitarilyDiagonalizable: return "UnitarilyDiagonalizable";
        case DiagVerdict::NotDiagonalizable: return "NotDiagonalizable";
        case DiagVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

std::optional<std::string> commutator_witness(const std::vector<CMatrix>& mus, const std::string& label) {
    for (std::size_t i = 0; i < mus.size(); ++i)
        for (std::size_t j = i + 1; j < mus.size(); ++j) {
            const double c = (mus[i] * mus[j] - mus[j] * mus[i]).norm();
            const double s = mus[i].norm() * mus[j].norm();
            if (c > kStructRel * s + 1e-300) {
                return "[" + label + std::to_string(j) + ", " + label + std::to_string(i) + "] != 0 (relative " +
                       fmt(c / s) + ")";
            }
        }
    return std::nullopt;
}

double max_offdiag(const CMatrix& T, const std::vector<CMatrix>& mus) {
    double worst = 0.0;
    for (const auto& mu : mus) {
        CMatrix d = T * mu * T.adjoint();
        worst = std::max(worst, offdiag_norm(d) / std::max(d.norm(), 1e-300));
    }
    return worst;
}

}  // namespace

DiagReport diagonalizability_report(const Functional& u, const Tolerance& tol, std::size_t n_test) {
    DiagReport rep;
    rep.n_test = n_test;
    const std::size_t upto = std::max<std::size_t>(5, n_test);
    std::string bad;
    if (!moments_hermitian(u, upto, tol, &bad)) {
        rep.verdict = DiagVerdict::Inconclusive;
        rep.witness = "non-hermitian moments: " + bad;
        return rep;
    }
    const Tolerance loose{kStructRel, tol.abs, tol.cond_max};
    HankelProfile hp = hankel_profile(u, 2, tol);
    rep.delta2_positive = hp.flags[2].positive_definite;
    rep.condition_ii = rep.delta2_positive;
    rep.mu0_positive = hp.flags[0].positive_definite;

    std::vector<CMatrix> raw;
    for (std::size_t k = 0; k <= n_test; ++k) raw.push_back(u.moment(k));

    if (rep.mu0_positive) {
        auto [uh, Lc] = normalize(u);
        std::vector<CMatrix> nm;
        for (std::size_t k = 1; k <= n_test; ++k) nm.push_back(uh.moment(k));
        auto w12 = commutator_witness({nm[0], nm.size() > 1 ? nm[1] : nm[0]}, "mu^_");
        rep.condition_i = !w12.has_value();
        if (!rep.condition_i) {
            rep.verdict = DiagVerdict::NotDiagonalizable;
            rep.witness = "after normalizing mu_0 = I: " + *w12;
            return rep;
        }
        auto T = simultaneous_unitary_diagonalizer(nm, loose);
        if (!T) {
            rep.verdict = DiagVerdict::NotDiagonalizable;
            rep.witness = commutator_witness(nm, "mu^_").value_or("no common eigenbasis for mu^_1..mu^_n");
            return rep;
        }
        rep.T = *T;
        rep.congruence = *T * inverse(Lc, tol);
        rep.max_offdiag = max_offdiag(*rep.congruence, raw);
    } else {
        if (auto w = commutator_witness(raw, "mu_")) {
            rep.verdict = DiagVerdict::NotDiagonalizable;
            rep.witness = *w;
            return rep;
        }
        auto T = simultaneous_unitary_diagonalizer(raw, loose);
        if (!T) {
            rep.verdict = DiagVerdict::Inconclusive;
            rep.witness = "moments commute but no common eigenbasis was found";
            return rep;
        }
        rep.T = *T;
        rep.congruence = *T;
        rep.max_offdiag = max_offdiag(*T, raw);
    }
    if (rep.max_offdiag <= kStructRel) {
        rep.verdict = DiagVerdict::UnitarilyDiagonalizable;
    } else {
        rep.verdict = DiagVerdict::NotDiagonalizable;
        rep.witness = "recovered T leaves off-diagonal mass " + fmt(rep.max_offdiag);
    }
    return rep;
}

GuardVerdict bessel_positivity_guard(const ZeroClassSpec& spec, const Functional& u, const Tolerance& tol) {
    CanonicalType ct = canonical_type(spec, tol);
    if (ct.tag != CanonicalTag::Bessel) throw PreconditionViolated("alpha has no double root");
    HankelProfile hp = hankel_profile(u, 2, tol);
    GuardVerdict g;
    for (std::size_t k = 0; k <= 2; ++k) g.delta.push_back(psd_check(hp.delta[k], tol));
    g.consistent = g.delta[2] != Definiteness::PositiveDefinite;
    if (g.consistent) {
        for (std::size_t k = 0; k <= 2; ++k) {
            if (g.delta[k] != Definiteness::PositiveDefinite) {
                g.detail = "Delta_" + std::to_string(k) + " is " + to_string(g.delta[k]);
                break;
            }
        }
    } else {
        g.detail = "Violation: Delta_0..Delta_2 positive definite for a double-root alpha";
    }
    return g;
}

GuardVerdict bessel_positivity_guard(const ZeroClassSpec& spec, const Tolerance& tol) {
    return bessel_positivity_guard(spec, Functional::from_pearson(spec.to_pearson(), tol), tol);
}

}  // namespace mopkit
