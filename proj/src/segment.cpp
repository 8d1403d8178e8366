#include "mopkit/segment.hpp"

#include <algorithm>

#include "mopkit/errors.hpp"

namespace mopkit {

const char* to_string(HorizonReason r) {
    switch (r) {
        case HorizonReason::None: return "none";
        case HorizonReason::SingularHankel: return "singular Hankel block";
        case HorizonReason::MomentsUndetermined: return "moments undetermined by the recurrence";
    }
    return "?";
}

const MatrixPolynomial& MonicSegment::poly_or_next(std::size_t k) const {
    if (k < polys.size()) return polys[k];
    if (k == polys.size()) {
        if (next) return *next;
        if (extra) return *extra;
    }
    throw InvalidParameter("polynomial of degree " + std::to_string(k) + " not in the segment");
}

namespace {

// <x^j P, u> for P given by its coefficients.
CMatrix shifted_bracket(const MatrixPolynomial& P, const Functional& u, std::size_t j) {
    CMatrix acc = CMatrix::Zero(u.dim(), u.dim());
    for (std::size_t i = 0; i < P.size(); ++i) acc += P.coeffs()[i] * u.moment(i + j);
    return acc;
}

// Monic P_{n+1} from (pi_0..pi_n) Delta_n = -(mu_{n+1}..mu_{2n+1}).
MatrixPolynomial next_monic(const Functional& u, std::size_t n, const Tolerance& tol) {
    const Index m = u.dim();
    BlockMatrix H = hankel_blocks(u, n);
    BlockRow rhs(n + 1);
    for (std::size_t j = 0; j <= n; ++j) rhs[j] = -u.moment(n + 1 + j);
    BlockRow X = solve_block_row(H, rhs, tol);
    X.push_back(identity(m));
    return MatrixPolynomial(m, std::move(X));
}

// E nonsingular both in the pivot-ratio sense and relative to the moment scale.
bool norm_nonsingular(const CMatrix& E, const Functional& u, std::size_t n, const Tolerance& tol) {
    if (!is_nonsingular(E, tol)) return false;
    double scale = 0.0;
    for (std::size_t k = 0; k <= 2 * n; ++k) scale = std::max(scale, u.moment(k).norm());
    return E.norm() > tol.rel * scale + tol.abs;
}

CMatrix subleading(const MatrixPolynomial& P, Index m) {
    const auto d = P.degree();
    if (!d || *d == 0) return CMatrix::Zero(m, m);
    return P.coeff(*d - 1);
}

}  // namespace

MonicSegment compute_segment(const Functional& u, std::size_t N, const Tolerance& tol, SegmentOptions opts) {
    const Index m = u.dim();
    MonicSegment seg;
    seg.dim = m;
    std::vector<MatrixPolynomial> polys{MatrixPolynomial::constant(identity(m))};

    auto stop = [&](HorizonReason r, std::size_t at, bool keep_last) {
        seg.horizon_flag = true;
        seg.reason = r;
        seg.blocked_at = at;
        if (!keep_last) {
            seg.extra = polys.back();
            polys.pop_back();
        }
    };

    for (std::size_t n = 0; n <= N; ++n) {
        // An explicit list that stops at mu_{2N} still determines P_0..P_N; only the
        // optional next polynomial is lost.
        if (n == N && u.horizon() && *u.horizon() < 2 * N + 1) {
            u.warm(2 * n);
            if (!is_nonsingular(shifted_bracket(polys.back(), u, n), tol)) stop(HorizonReason::SingularHankel, n, false);
            break;
        }
        // polys.back() is P_n; certify Delta_n by building P_{n+1}.
        try {
            u.warm(2 * n + 1);
        } catch (const RecurrenceBlocked& e) {
            if (!opts.truncate_on_blocked_recurrence) throw;
            const std::size_t avail = e.index();  // mu_0..mu_avail are known
            bool keep = false;
            if (avail >= 2 * n) {
                const CMatrix En = shifted_bracket(polys.back(), u, n);
                keep = norm_nonsingular(En, u, n, tol);
            }
            stop(HorizonReason::MomentsUndetermined, avail, keep);
            break;
        }
        MatrixPolynomial Pn1(m);
        try {
            Pn1 = next_monic(u, n, tol);
        } catch (const SingularSystem&) {
            stop(HorizonReason::SingularHankel, n, false);
            break;
        }
        const CMatrix En = shifted_bracket(polys.back(), u, n);
        if (!is_nonsingular(En, tol)) {
            stop(HorizonReason::SingularHankel, n, false);
            break;
        }
        if (n < N)
            polys.push_back(std::move(Pn1));
        else
            seg.next = std::move(Pn1);
    }

    seg.polys = std::move(polys);
    for (std::size_t k = 0; k < seg.polys.size(); ++k) {
        seg.E.push_back(shifted_bracket(seg.polys[k], u, k));
        seg.pi.push_back(subleading(seg.polys[k], m));
        for (std::size_t j = 0; j < k; ++j)
            seg.orthogonality_residual =
                std::max(seg.orthogonality_residual,
                         shifted_bracket(seg.polys[k], u, j).norm() / std::max(seg.E[k].norm(), tol.abs));
    }
    if (!seg.polys.empty()) {
        const auto rec = recurrence_coefficients(seg, tol);
        seg.beta = rec.beta;
        seg.gamma = rec.gamma;
        seg.recurrence_residual = rec.residual;
    }
    return seg;
}

Recurrence recurrence_coefficients(const MonicSegment& seg, const Tolerance& tol) {
    Recurrence r;
    const std::size_t len = seg.polys.size();
    const Index m = seg.dim;
    for (std::size_t k = 0; k + 1 < len; ++k) r.beta.push_back(seg.pi[k] - seg.pi[k + 1]);
    r.gamma.push_back(CMatrix::Zero(m, m));
    for (std::size_t k = 1; k < len; ++k) r.gamma.push_back(solve_right(seg.E[k - 1], seg.E[k], tol));
    for (std::size_t k = 0; k + 1 < len; ++k) {
        MatrixPolynomial res = seg.polys[k].shift(1) - seg.polys[k + 1] - seg.polys[k].left(r.beta[k]);
        if (k > 0) res -= seg.polys[k - 1].left(r.gamma[k]);
        r.residual = std::max(r.residual, res.norm() / std::max(seg.polys[k].norm(), tol.abs));
    }
    return r;
}

Functional favard_roundtrip(const std::vector<CMatrix>& beta, const std::vector<CMatrix>& gamma,
                            const CMatrix& mu0, const Tolerance& tol) {
    const std::size_t N = beta.size();
    const Index m = mu0.rows();
    if (gamma.size() != N && gamma.size() != N + 1)
        throw DimensionMismatch("gamma must have N or N+1 entries");
    for (std::size_t k = 1; k < gamma.size(); ++k)
        if (!is_nonsingular(gamma[k], tol) || gamma[k].norm() <= tol.abs)
            throw InvalidRecurrence("gamma_" + std::to_string(k) + " is singular");

    std::vector<MatrixPolynomial> P{MatrixPolynomial::constant(identity(m))};
    for (std::size_t k = 0; k < N; ++k) {
        MatrixPolynomial nxt = P[k].shift(1) - P[k].left(beta[k]);
        if (k > 0) nxt -= P[k - 1].left(gamma[k]);
        P.push_back(std::move(nxt));
    }

    std::vector<CMatrix> mu{mu0};
    CMatrix E = mu0;
    auto partial = [&](std::size_t k, std::size_t j) {  // sum_{i<k} p_i mu_{i+j}
        CMatrix acc = CMatrix::Zero(m, m);
        for (std::size_t i = 0; i < k; ++i) acc += P[k].coeff(i) * mu[i + j];
        return acc;
    };
    for (std::size_t k = 1; k <= N; ++k) {
        mu.push_back(-partial(k, k - 1));  // <x^{k-1} P_k, u> = 0
        if (k < gamma.size()) {
            E = gamma[k] * E;
            mu.push_back(E - partial(k, k));  // <x^k P_k, u> = E_k
        }
    }
    return Functional::from_moments(std::move(mu));
}

DerivativeSegment derivative_segment(const MonicSegment& seg, const PearsonSpec& spec, const Functional& u,
                                     const Tolerance& tol) {
    const Index m = seg.dim;
    DerivativeSegment d{MonicSegment{}, {}, 0.0, 0.0, right_multiply(u, spec.Phi)};
    d.seg.dim = m;
    for (std::size_t k = 1; k < seg.polys.size(); ++k) {
        const CMatrix Mk = spec.M(static_cast<long>(k) - 1);
        if (!is_nonsingular(Mk, tol))
            throw DerivativeNotOrthogonal("psi_1 + (k-1) phi_2 singular at k = " + std::to_string(k), k);
        const MatrixPolynomial dP = seg.polys[k].derivative();
        MatrixPolynomial Q = (1.0 / static_cast<double>(k)) * dP;
        const CMatrix formula = -(1.0 / static_cast<double>(k)) * seg.E[k] * Mk;
        const CMatrix direct = shifted_bracket(Q, d.u_tilde, k - 1);
        d.bracket_identity_residual = std::max(
            d.bracket_identity_residual, (shifted_bracket(dP, d.u_tilde, k - 1) + seg.E[k] * Mk).norm() /
                                             std::max((seg.E[k] * Mk).norm(), tol.abs));
        d.seg.polys.push_back(std::move(Q));
        d.seg.E.push_back(direct);
        d.seg.pi.push_back(subleading(d.seg.polys.back(), m));
        d.E_formula.push_back(formula);
    }
    d.orthogonality_residual = orthogonality_defect(d.seg.polys, d.u_tilde, tol.abs);
    d.seg.orthogonality_residual = d.orthogonality_residual;
    if (!d.seg.polys.empty()) {
        const auto rec = recurrence_coefficients(d.seg, tol);
        d.seg.beta = rec.beta;
        d.seg.gamma = rec.gamma;
        d.seg.recurrence_residual = rec.residual;
    }
    return d;
}

std::vector<double> derivative_recurrence_defect(const MonicSegment& seg) {
    std::vector<MatrixPolynomial> Q;
    for (std::size_t k = 1; k < seg.polys.size(); ++k)
        Q.push_back((1.0 / static_cast<double>(k)) * seg.polys[k].derivative());
    std::vector<double> defect(Q.empty() ? 0 : Q.size() - 1, 0.0);
    for (std::size_t k = 0; k + 1 < Q.size(); ++k) {
        MatrixPolynomial R = Q[k].shift(1) - Q[k + 1];  // degree <= k
        R -= Q[k].left(R.coeff(k));
        if (k > 0) R -= Q[k - 1].left(R.coeff(k - 1));
        defect[k] = R.norm() / std::max(Q[k].norm(), 1e-300);
    }
    return defect;
}

LadderCoefficients ladder_coefficients(const MonicSegment& seg, const DerivativeSegment& dseg,
                                       const Tolerance& tol) {
    const Index m = seg.dim;
    LadderCoefficients lc;
    lc.a.push_back(CMatrix::Zero(m, m));
    lc.b.push_back(CMatrix::Zero(m, m));
    lc.residual.push_back(0.0);
    lc.gamma_minus_b_nonsingular.push_back(true);
    const std::size_t len = seg.polys.size();
    for (std::size_t n = 1; n + 1 < len && n < dseg.seg.beta.size() + 1; ++n) {
        const double nd = static_cast<double>(n);
        const CMatrix a = seg.beta[n] - dseg.seg.beta[n - 1];
        const CMatrix b = n >= 2 ? CMatrix(seg.gamma[n] - (nd / (nd - 1.0)) * dseg.seg.gamma[n - 1])
                                 : CMatrix(CMatrix::Zero(m, m));  // P'_0 = 0, b_1 is free
        MatrixPolynomial rhs = (1.0 / (nd + 1.0)) * seg.polys[n + 1].derivative();
        rhs += seg.polys[n].derivative().left(a);
        rhs += seg.polys[n - 1].derivative().left(b);
        const double res = (seg.polys[n] - rhs).norm() / std::max(seg.polys[n].norm(), tol.abs);
        lc.a.push_back(a);
        lc.b.push_back(b);
        lc.residual.push_back(res);
        lc.gamma_minus_b_nonsingular.push_back(is_nonsingular(seg.gamma[n] - b, tol));
        lc.max_residual = std::max(lc.max_residual, res);
    }
    return lc;
}

LadderPair ladder_relations(const MonicSegment& seg, const PearsonSpec& spec, std::size_t n,
                            const Tolerance& tol) {
    if (n < 1 || n >= seg.polys.size()) throw InvalidParameter("ladder_relations needs 1 <= n <= N");
    const long ln = static_cast<long>(n);
    const double nd = static_cast<double>(n);
    const MatrixPolynomial& Pn = seg.polys[n];
    const MatrixPolynomial& Pn1 = seg.poly_or_next(n + 1);
    const CMatrix& En = seg.E[n];
    const CMatrix pin1 = subleading(Pn1, seg.dim);

    CMatrix A, Einv;  // A = M_{2n-1}^{-1} E_n^{-1}
    try {
        Einv = inverse(En, tol);
        A = inverse(spec.M(2 * ln - 1), tol) * Einv;
    } catch (const SingularSystem&) {
        throw LadderBlocked("M_" + std::to_string(2 * n - 1) + " or E_n singular", n);
    }
    const MatrixPolynomial dPn = Pn.derivative();

    MatrixPolynomial bracket_minus = dPn.shift(1) + dPn.left(seg.pi[n] / nd) - nd * Pn;
    LadderPair out{bracket_minus.left(seg.E[n - 1] * spec.M(ln - 2) * A), MatrixPolynomial(seg.dim)};

    const CMatrix c1 = spec.phi(2) * A;
    const CMatrix c0 = -(1.0 / nd) * spec.M(2 * ln - 2) * A * seg.pi[n] + (1.0 / (nd + 1.0)) * Einv * pin1;
    MatrixPolynomial inner_poly = dPn.shift(1).left(c1) + dPn.left(c0) + Pn.left(spec.M(ln - 1) * A);
    out.p_plus = inner_poly.left((nd + 1.0) * En);
    return out;
}

double orthogonality_defect(const std::vector<MatrixPolynomial>& Q, const Functional& v, double abs_floor) {
    double worst = 0.0;
    for (std::size_t k = 0; k < Q.size(); ++k) {
        const double nk = std::max(shifted_bracket(Q[k], v, k).norm(), abs_floor);
        for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, shifted_bracket(Q[k], v, j).norm() / nk);
    }
    return worst;
}

std::optional<std::size_t> quasi_orthogonality_order(const MonicSegment& seg, const Functional& v,
                                                     std::size_t pmax, const Tolerance& tol) {
    // brackets[n][k] = |<x^k P_n, v>| for k <= n
    std::vector<std::vector<double>> br(seg.polys.size());
    std::vector<double> scale(seg.polys.size(), 0.0);
    for (std::size_t n = 0; n < seg.polys.size(); ++n)
        for (std::size_t k = 0; k <= n; ++k) {
            br[n].push_back(shifted_bracket(seg.polys[n], v, k).norm());
            scale[n] = std::max(scale[n], br[n].back());
        }
    for (std::size_t p = 0; p <= pmax; ++p) {
        bool ok = true;
        for (std::size_t n = 0; n < seg.polys.size() && ok; ++n)
            for (std::size_t k = 0; k + p < n && ok; ++k)
                ok = br[n][k] <= 10.0 * tol.rel * scale[n] + tol.abs;
        if (ok) return p;
    }
    return std::nullopt;
}

}  // namespace mopkit
