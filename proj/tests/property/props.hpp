#pragma once
// Randomized invariants. Each runner draws `cases` valid inputs from a fixed seed and returns
// the worst relative residual; the property binary and the acceptance binary share them.

#include <algorithm>
#include <string>

#include "gen.hpp"
#include "mopkit/errors.hpp"
#include "mopkit/pearson.hpp"
#include "mopkit/segment.hpp"
#include "mopkit/zeroclass.hpp"

namespace props {

using namespace mopkit;

struct Result {
    std::size_t cases = 0;
    std::size_t skipped = 0;  // draws rejected before the property applied (blocked ladders etc.)
    double worst = 0.0;
    std::string where;

    void record(double r, const std::string& label) {
        ++cases;
        if (!(r <= worst)) {  // NaN sticks
            worst = r;
            where = label;
        }
    }
};

inline double rd(const CMatrix& a, const CMatrix& b) {
    const double s = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / s;
}

// Relative, with an absolute floor for quantities that may legitimately be near zero.
inline double rdf(const CMatrix& a, const CMatrix& b, double floor) {
    return (a - b).norm() / std::max({a.norm(), b.norm(), floor, 1e-300});
}

inline double rd(const MatrixPolynomial& a, const MatrixPolynomial& b) {
    const double s = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / s;
}

// Bound on the number of draws so a broken generator cannot loop forever.
inline std::size_t max_draws(std::size_t cases) { return 5 * cases + 50; }

// --- functional algebra -------------------------------------------------------------------

inline Result product_rule(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 3);
        const Functional u = Functional::from_moments(r.moments(m, 14));
        const MatrixPolynomial Phi = r.poly(m, static_cast<std::size_t>(r.integer(0, 3)));
        const Functional lhs = derivative(right_multiply(u, Phi));
        const Functional rhs_a = right_multiply(derivative(u), Phi);
        const Functional rhs_b = right_multiply(u, Phi.derivative());
        double w = 0.0;
        for (std::size_t n = 0; n <= 9; ++n) {
            const CMatrix a = rhs_a.moment(n);
            const CMatrix b = Phi.derivative().is_zero() ? zeros(m) : CMatrix(rhs_b.moment(n));
            // the two terms cancel exactly at n = 0, so scale by their size
            w = std::max(w, rdf(lhs.moment(n), a + b, a.norm() + b.norm()));
        }
        res.record(w, "product rule case " + std::to_string(c));
    }
    return res;
}

inline Result product_associativity(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 3);
        const Functional u = Functional::from_moments(r.moments(m, 16));
        const MatrixPolynomial Q = r.poly(m, static_cast<std::size_t>(r.integer(0, 3)));
        const MatrixPolynomial R = r.poly(m, static_cast<std::size_t>(r.integer(0, 3)));
        const Functional a = right_multiply(right_multiply(u, Q), R);
        const Functional b = right_multiply(u, poly_mul(Q, R));
        // and the left product: R(Qu) = (RQ)u
        const Functional la = left_multiply(left_multiply(u, Q), R);
        const Functional lb = left_multiply(u, poly_mul(R, Q));
        double w = 0.0;
        for (std::size_t n = 0; n <= 9; ++n) w = std::max({w, rd(a.moment(n), b.moment(n)), rd(la.moment(n), lb.moment(n))});
        res.record(w, "associativity case " + std::to_string(c));
    }
    return res;
}

inline Result adjoint_involution(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 4);
        const Functional u = Functional::from_moments(r.moments(m, 10));
        const Functional v = adjoint(adjoint(u));
        // <P, u*Q> = <Q*, uP*>*
        const MatrixPolynomial P = r.poly(m, 2), Q = r.poly(m, 2);
        const CMatrix lhs = bracket(P, right_multiply(adjoint(u), Q));
        const CMatrix rhs = bracket(Q.adjoint(), right_multiply(u, P.adjoint())).adjoint();
        double w = rd(lhs, rhs);
        for (std::size_t n = 0; n < 10; ++n) w = std::max(w, rd(v.moment(n), u.moment(n)));
        res.record(w, "adjoint case " + std::to_string(c));
    }
    return res;
}

inline Result affine_composition(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 3);
        const Functional u = Functional::from_moments(r.moments(m, 10));
        cplx a1 = r.z(), a2 = r.z();
        if (std::abs(a1) < 0.2) a1 += 0.5;
        if (std::abs(a2) < 0.2) a2 += 0.5;
        const cplx b1 = r.z(), b2 = r.z();
        // <P, (u_{t1})_{t2}> = <P o t2 o t1, u>, and t2 o t1 = a2 a1 x + a2 b1 + b2
        const Functional twice = change_of_variable(change_of_variable(u, a1, b1), a2, b2);
        const Functional once = change_of_variable(u, a2 * a1, a2 * b1 + b2);
        double w = 0.0;
        for (std::size_t n = 0; n < 10; ++n) w = std::max(w, rd(twice.moment(n), once.moment(n)));
        res.record(w, "composition case " + std::to_string(c));
    }
    return res;
}

// D(u alpha I) has moments -n (u alpha)_{n-1}
inline Result derivative_of_scalar_product(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 3);
        const Functional u = Functional::from_moments(r.moments(m, 12));
        const MatrixPolynomial alpha = MatrixPolynomial::scalar({r.z(), r.z(), r.z()}, m);
        const Functional ua = right_multiply(u, alpha);
        const Functional d = derivative(ua);
        double w = 0.0;
        for (std::size_t n = 1; n <= 8; ++n) w = std::max(w, rd(d.moment(n), -static_cast<double>(n) * ua.moment(n - 1)));
        res.record(w, "D(u alpha) case " + std::to_string(c));
    }
    return res;
}

// --- Pearson: <x^{k-1} P'_k, u Phi> = -E_k (psi_1 + (k-1) phi_2) --------------------------

inline PearsonSpec random_pearson(gen::Rng& r, Index m) {
    const MatrixPolynomial Phi(m, {r.near_identity(m), r.mat(m, 0.2), r.mat(m, 0.05)});
    const MatrixPolynomial Psi(m, {r.mat(m, 0.5), -2.0 * r.near_identity(m)});
    return PearsonSpec(Phi, Psi, r.hpd(m));
}

inline Result bracket_identity(std::uint64_t seed, std::size_t cases, std::size_t N = 4) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t draw = 0; res.cases < cases && draw < max_draws(cases); ++draw) {
        const Index m = r.integer(1, 3);
        const PearsonSpec spec = random_pearson(r, m);
        try {
            const Functional u = Functional::from_pearson(spec);
            const MonicSegment seg = compute_segment(u, N);
            if (seg.horizon_flag) {
                ++res.skipped;
                continue;
            }
            const DerivativeSegment d = derivative_segment(seg, spec, u);
            res.record(d.bracket_identity_residual, "bracket identity draw " + std::to_string(draw));
        } catch (const Error&) {
            ++res.skipped;
        }
    }
    return res;
}

// --- zero class: alpha P'_n = n alpha_2 P_{n+1} + eta_n P_n + theta_n P_{n-1} ---------------

inline Result structure_relation_property(std::uint64_t seed, std::size_t cases, std::size_t N = 5) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t draw = 0; res.cases < cases && draw < max_draws(cases); ++draw) {
        const Index m = r.integer(1, 3);
        const ZeroClassSpec spec = gen::zero_class(r, m);
        try {
            if (!existence_check(spec, N + 1).quasi_definite) {
                ++res.skipped;
                continue;
            }
            const Functional u = Functional::from_pearson(spec.to_pearson());
            const MonicSegment seg = compute_segment(u, N + 1);
            if (seg.horizon_flag) {
                ++res.skipped;
                continue;
            }
            const StructureRelation sr = structure_relation(spec, seg);
            res.record(std::max(sr.max_residual, sr.max_sigma_residual), "structure relation draw " + std::to_string(draw));
        } catch (const Error&) {
            ++res.skipped;
        }
    }
    return res;
}

// closed forms and the ODE solver against the Hankel segment
inline Result closed_form_property(std::uint64_t seed, std::size_t cases, std::size_t N = 5) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t draw = 0; res.cases < cases && draw < max_draws(cases); ++draw) {
        const Index m = r.integer(1, 3);
        const ZeroClassSpec spec = gen::zero_class(r, m);
        try {
            if (!existence_check(spec, N + 1).quasi_definite) {
                ++res.skipped;
                continue;
            }
            const Functional u = Functional::from_pearson(spec.to_pearson());
            const MonicSegment seg = compute_segment(u, N + 1);
            if (seg.horizon_flag) {
                ++res.skipped;
                continue;
            }
            Ladders L(spec);
            double w = 0.0;
            for (std::size_t n = 1; n <= N; ++n) {
                w = std::max(w, rd(closed_form_E(L, n), seg.E[n]));
                w = std::max(w, rdf(closed_form_pi(L, n), seg.pi[n], 1.0));
                const ClosedFormRatios cr = closed_form_ratios(L, n);
                const CMatrix Einv = seg.E[n].inverse();
                w = std::max(w, rd(cr.ratio, Einv * seg.E[n + 1]));
                const CMatrix k = kappa(L, n);
                w = std::max(w, rd(ode_solve(L, n, k), seg.polys[n].left(k)));
            }
            res.record(w, "closed forms draw " + std::to_string(draw));
        } catch (const Error&) {
            ++res.skipped;
        }
    }
    return res;
}

// --- Favard -----------------------------------------------------------------------------

inline Result favard(std::uint64_t seed, std::size_t cases, std::size_t N = 4) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t draw = 0; res.cases < cases && draw < max_draws(cases); ++draw) {
        const Index m = r.integer(1, 3);
        try {
            // recurrence -> moments -> recurrence
            std::vector<CMatrix> beta, gamma{zeros(m)};
            for (std::size_t k = 0; k < N; ++k) beta.push_back(r.mat(m, 0.5));
            for (std::size_t k = 1; k <= N; ++k) gamma.push_back(r.near_identity(m));
            const CMatrix mu0 = r.hpd(m);
            const Functional w = favard_roundtrip(beta, gamma, mu0);
            const MonicSegment seg = compute_segment(w, N);
            if (seg.horizon_flag) {
                ++res.skipped;
                continue;
            }
            const Recurrence rc = recurrence_coefficients(seg);
            double worst = rd(w.moment(0), mu0);
            for (std::size_t k = 0; k < N; ++k) worst = std::max(worst, rdf(rc.beta[k], beta[k], 1.0));
            for (std::size_t k = 1; k <= N; ++k) worst = std::max(worst, rd(rc.gamma[k], gamma[k]));

            // moments -> recurrence -> moments, on a positive definite functional
            const Functional u = gen::discrete_pd(r, m, static_cast<std::size_t>(m) * (N + 2), 2 * N + 2);
            const MonicSegment su = compute_segment(u, N);
            const Recurrence ru = recurrence_coefficients(su);
            std::vector<CMatrix> g(su.gamma.begin(), su.gamma.begin() + static_cast<long>(N) + 1);
            const Functional back = favard_roundtrip(ru.beta, g, u.moment(0));
            for (std::size_t n = 0; n <= 2 * N; ++n) worst = std::max(worst, rd(back.moment(n), u.moment(n)));
            res.record(worst, "favard draw " + std::to_string(draw));
        } catch (const Error&) {
            ++res.skipped;
        }
    }
    return res;
}

// --- segments on positive definite functionals -----------------------------------------

inline Result segment_orthogonality(std::uint64_t seed, std::size_t cases, std::size_t N = 5) {
    gen::Rng r(seed);
    Result res;
    const Tolerance tol;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 3);
        const Functional u = gen::discrete_pd(r, m, static_cast<std::size_t>(m) * (N + 3), 2 * N + 2);
        const MonicSegment seg = compute_segment(u, N);
        double w = seg.horizon_flag ? 1.0 : seg.orthogonality_residual;
        for (const auto& E : seg.E) {
            if (psd_check(E, tol) != Definiteness::PositiveDefinite) w = std::max(w, 1.0);
            w = std::max(w, rd(E, E.adjoint()));
        }
        // <P, u P*> hermitian for a hermitian functional
        const MatrixPolynomial P = r.poly(m, static_cast<std::size_t>(r.integer(0, 3)));
        const CMatrix G = inner(P, P, u);
        w = std::max(w, rdf(G, G.adjoint(), P.norm() * P.norm() * u.moment(0).norm()));
        res.record(w, "segment draw " + std::to_string(c));
    }
    return res;
}

// --- module bases on random Pearson functionals ---------------------------------------------

inline Result module_properties(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t draw = 0; res.cases < cases && draw < max_draws(cases); ++draw) {
        const Index m = r.integer(1, 2);
        const PearsonSpec spec = random_pearson(r, m);
        try {
            const Functional u = Functional::from_pearson(spec);
            if (!hankel_profile(u, 2).all_nonsingular()) {
                ++res.skipped;
                continue;
            }
            const ModuleBasis b21 = module_basis(u, 2, 1);
            const ModuleBasis b32 = module_basis(u, 3, 2);
            // the generating pair is in M_{2,1}, and M_{2,1} has rank at most one
            double w = b21.rank == 1 ? 0.0 : 1.0;
            // monotone: M_{2,1} embeds in M_{3,2}
            if (b32.nullity < b21.nullity) w = 1.0;
            w = std::max({w, b21.certificate_residual, b32.certificate_residual});
            res.record(w, "module draw " + std::to_string(draw));
        } catch (const Error&) {
            ++res.skipped;
        }
    }
    return res;
}

// the scalar alpha of the class divides det Phi
inline Result ideal_divides_det(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t draw = 0; res.cases < cases && draw < max_draws(cases); ++draw) {
        const Index m = r.integer(1, 2);
        const PearsonSpec spec = random_pearson(r, m);
        try {
            const Functional u = Functional::from_pearson(spec);
            const ClassReport cr = scalar_ideal(u, spec, static_cast<std::size_t>(2 * m));
            // long division of det Phi by the monic alpha
            std::vector<cplx> num;
            const DetAdj da = poly_det_adj(spec.Phi);
            for (const auto& c : da.det.coeffs()) num.push_back(c(0, 0));
            std::vector<cplx> den;
            for (const auto& c : cr.alpha.coeffs()) den.push_back(c(0, 0));
            const std::size_t dd = den.size() - 1;
            double scale = 0.0;
            for (cplx v : num) scale = std::max(scale, std::abs(v));
            for (std::size_t k = num.size(); k-- > dd;) {
                const cplx q = num[k] / den[dd];
                for (std::size_t j = 0; j <= dd; ++j) num[k - dd + j] -= q * den[j];
            }
            double rem = 0.0;
            for (std::size_t k = 0; k < std::min(dd, num.size()); ++k) rem = std::max(rem, std::abs(num[k]));
            res.record(rem / std::max(scale, 1e-300), "ideal draw " + std::to_string(draw));
        } catch (const Error&) {
            ++res.skipped;
        }
    }
    return res;
}

// --- hermitian zero class -------------------------------------------------------------

inline Result obstruction_identity(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 3);
        const bool unit = r.integer(0, 1) == 1;
        const auto h = gen::hermitian_zero_class(r, m, unit);
        try {
            const Functional u = Functional::from_pearson(h.spec.to_pearson());
            double w = 0.0;
            for (std::size_t n = 1; n <= 4; ++n) {
                w = std::max(w, hermiticity_obstruction(u, h.spec, n).relative);
                if (unit) w = std::max(w, hermiticity_obstruction(u, h.spec, n, true).relative);
            }
            res.record(w, "obstruction case " + std::to_string(c));
        } catch (const Error& e) {
            res.record(std::numeric_limits<double>::infinity(), std::string("obstruction threw: ") + e.what());
        }
    }
    return res;
}

inline Result diagonalization_recovery(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(2, 3);
        const auto h = gen::hermitian_zero_class(r, m);
        const Functional u = Functional::from_pearson(h.spec.to_pearson());
        const DiagReport d = diagonalizability_report(u, {}, 8);
        double w = d.verdict == DiagVerdict::UnitarilyDiagonalizable ? d.max_offdiag : 1.0;
        if (d.congruence) {
            const CMatrix& C = *d.congruence;
            for (std::size_t n = 0; n <= 8; ++n) {
                const CMatrix D = C * u.moment(n) * C.adjoint();
                w = std::max(w, offdiag_norm(D) / std::max(D.norm(), 1e-300));
            }
        } else {
            w = 1.0;
        }
        res.record(w, "diagonalization case " + std::to_string(c));
    }
    return res;
}

// --- linalg -----------------------------------------------------------------------------

inline Result block_solve(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    const Tolerance tol;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 4);
        const std::size_t p = static_cast<std::size_t>(r.integer(1, 5));
        BlockMatrix H(p, std::vector<CMatrix>(p));
        BlockRow rhs(p);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) H[i][j] = r.mat(m);
            H[i][i] += 2.0 * static_cast<double>(p * static_cast<std::size_t>(m)) * CMatrix::Identity(m, m);
            rhs[i] = r.mat(m);
        }
        const BlockRow X = solve_block_row(H, rhs, tol);
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            CMatrix s = CMatrix::Zero(m, m);
            for (std::size_t i = 0; i < p; ++i) s += X[i] * H[i][j];
            num += (s - rhs[j]).squaredNorm();
            den += rhs[j].squaredNorm();
        }
        // reported relative to 10 tol.rel so that <= 1 means the spec bound holds
        res.record(std::sqrt(num / den) / (10.0 * tol.rel), "block solve case " + std::to_string(c));
    }
    return res;
}

inline Result det_adj(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 4);
        const MatrixPolynomial P = r.poly(m, static_cast<std::size_t>(r.integer(0, 3)));
        const DetAdj da = poly_det_adj(P);
        const MatrixPolynomial lhs = poly_mul(P, da.adj);
        const MatrixPolynomial rhs = scalar_mul(da.det, MatrixPolynomial::constant(identity(m)));
        const MatrixPolynomial lhs2 = poly_mul(da.adj, P);
        res.record(std::max(rd(lhs, rhs), rd(lhs2, rhs)), "det/adj case " + std::to_string(c));
    }
    return res;
}

inline Result poly_ring(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 4);
        auto d = [&] { return static_cast<std::size_t>(r.integer(0, 4)); };
        const MatrixPolynomial A = r.poly(m, d()), B = r.poly(m, d()), C = r.poly(m, d());
        const double assoc = rd(poly_mul(poly_mul(A, B), C), poly_mul(A, poly_mul(B, C)));
        const double dist = rd(poly_mul(A, B + C), poly_mul(A, B) + poly_mul(A, C));
        const cplx x = r.z();
        const double eval = rd(poly_mul(A, B)(x), A(x) * B(x));
        res.record(std::max({assoc, dist, eval}), "ring case " + std::to_string(c));
    }
    return res;
}

inline Result diagonalizer(std::uint64_t seed, std::size_t cases) {
    gen::Rng r(seed);
    Result res;
    const Tolerance tol;
    for (std::size_t c = 0; c < cases; ++c) {
        const Index m = r.integer(1, 4);
        const CMatrix U = Eigen::HouseholderQR<CMatrix>(r.mat(m)).householderQ();
        std::vector<CMatrix> As;
        const int count = r.integer(1, 3);
        for (int i = 0; i < count; ++i) {
            CMatrix D = CMatrix::Zero(m, m);
            // repeated eigenvalues half the time
            for (Index k = 0; k < m; ++k) D(k, k) = r.integer(0, 1) ? 1.0 : r.uni(-2, 2);
            As.push_back(U * D * U.adjoint());
        }
        const auto T = simultaneous_unitary_diagonalizer(As, tol);
        if (!T) {
            res.record(std::numeric_limits<double>::infinity(), "diagonalizer returned none, case " + std::to_string(c));
            continue;
        }
        double w = rd(*T * T->adjoint(), identity(m));
        for (const auto& A : As) w = std::max(w, offdiag_norm(*T * A * T->adjoint()) / std::max(A.norm(), 1e-300));
        res.record(w, "diagonalizer case " + std::to_string(c));
    }
    return res;
}

}  // namespace props
