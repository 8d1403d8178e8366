#include "mopkit/pearson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "mopkit/errors.hpp"

namespace mopkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Null space of A after row and column equilibration. Returns the null vectors in the
// original (unscaled) coordinates, the singular values and the gap.
struct NullSpace {
    CMatrix basis;  // ncols x nullity
    std::vector<double> sv;
    double gap = 0.0;
};

NullSpace null_space(CMatrix A, double tau) {
    const Index rows = A.rows(), cols = A.cols();
    for (Index i = 0; i < rows; ++i) {
        double s = A.row(i).cwiseAbs().maxCoeff();
        if (s > 0) A.row(i) /= s;
    }
    Eigen::VectorXd colscale(cols);
    for (Index j = 0; j < cols; ++j) {
        double s = A.col(j).norm();
        colscale(j) = s > 0 ? 1.0 / s : 1.0;
        A.col(j) *= colscale(j);
    }
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    NullSpace out;
    out.sv.assign(s.data(), s.data() + s.size());
    // rows may be fewer than cols; missing singular values are exact zeros
    out.sv.resize(static_cast<std::size_t>(cols), 0.0);
    const double smax = out.sv.empty() ? 0.0 : out.sv.front();
    std::size_t rank = 0;
    while (rank < out.sv.size() && out.sv[rank] > tau * smax) ++rank;
    const double floor = kEps * std::max(smax, 1e-300);
    if (rank == 0) {
        out.gap = 0.0;
    } else {
        double discarded = rank < out.sv.size() ? std::max(out.sv[rank], floor) : floor;
        out.gap = out.sv[rank - 1] / discarded;
    }
    const Index nullity = cols - static_cast<Index>(rank);
    out.basis = CMatrix(cols, nullity);
    for (Index k = 0; k < nullity; ++k) {
        out.basis.col(k) = colscale.cast<cplx>().cwiseProduct(svd.matrixV().col(static_cast<Index>(rank) + k));
    }
    return out;
}

// det Phi at a handful of points, relative to |Phi(x)|^m.
bool det_identically_zero(const MatrixPolynomial& Phi) {
    if (Phi.is_zero()) return true;
    const cplx pts[] = {{0.37, 0.0}, {-1.3, 0.0}, {2.1, 0.0}, {0.2, 0.9}, {-0.7, -0.45}};
    const auto m = static_cast<double>(Phi.dim());
    for (cplx x : pts) {
        CMatrix v = Phi(x);
        double n = v.norm();
        if (n == 0) continue;
        if (std::abs(v.determinant()) > 1e-8 * std::pow(n, m)) return false;
    }
    return true;
}

std::size_t degree_or_zero(const MatrixPolynomial& p) { return p.degree().value_or(0); }

}  // namespace

const char* to_string(Cyclicity c) {
    switch (c) {
        case Cyclicity::Cyclic: return "Cyclic";
        case Cyclicity::CyclicDegenerate: return "CyclicDegenerate";
        case Cyclicity::Trivial: return "Trivial";
        case Cyclicity::NotCyclic: return "NotCyclic";
        case Cyclicity::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::size_t default_certificate_horizon(Index m, std::size_t p, std::size_t q) {
    // never fewer than 40 equations, even for tiny (p, q)
    return std::max<std::size_t>(40, 2 * static_cast<std::size_t>(m) * (p + q + 3));
}

ModuleBasis module_basis(const Functional& u, std::size_t p, std::size_t q, std::optional<std::size_t> horizon,
                         const Tolerance& tol) {
    tol.validate();
    const Index m = u.dim();
    const std::size_t N = horizon.value_or(default_certificate_horizon(m, p, q));
    const Index nblk = static_cast<Index>(p + q + 2);
    // unknown column vector: [phi_0 e; ..; phi_p e; psi_0 e; ..; psi_q e]
    CMatrix A = CMatrix::Zero(m * static_cast<Index>(N + 1), m * nblk);
    for (std::size_t n = 0; n <= N; ++n) {
        const Index r = m * static_cast<Index>(n);
        for (std::size_t i = 0; i <= p; ++i) {
            if (n + i == 0) continue;
            if (n == 0) continue;
            A.block(r, m * static_cast<Index>(i), m, m) = static_cast<double>(n) * u.moment(n + i - 1);
        }
        for (std::size_t j = 0; j <= q; ++j) {
            A.block(r, m * static_cast<Index>(p + 1 + j), m, m) = u.moment(n + j);
        }
    }
    NullSpace ns = null_space(A, tol.rel);

    ModuleBasis out;
    out.p = p;
    out.q = q;
    out.horizon = N;
    out.singular_values = ns.sv;
    out.gap = ns.gap;
    out.nullity = static_cast<std::size_t>(ns.basis.cols());
    const Index d = ns.basis.cols();
    out.rank = static_cast<std::size_t>((d + m - 1) / m);

    for (Index g = 0; g * m < d; ++g) {
        std::vector<CMatrix> phi(p + 1, zeros(m)), psi(q + 1, zeros(m));
        std::vector<bool> used(static_cast<std::size_t>(m), false);
        for (Index c = g * m; c < std::min(d, (g + 1) * m); ++c) {
            Eigen::VectorXcd z = ns.basis.col(c);
            z /= z.cwiseAbs().maxCoeff();
            // put the vector in the column where it is heaviest, for readable generators
            Eigen::VectorXd weight = Eigen::VectorXd::Zero(m);
            for (Index b = 0; b < nblk; ++b) weight += z.segment(b * m, m).cwiseAbs2();
            Index col = -1;
            for (Index k = 0; k < m; ++k) {
                if (used[static_cast<std::size_t>(k)]) continue;
                if (col < 0 || weight(k) > weight(col)) col = k;
            }
            used[static_cast<std::size_t>(col)] = true;
            for (std::size_t i = 0; i <= p; ++i) phi[i].col(col) = z.segment(m * static_cast<Index>(i), m);
            for (std::size_t j = 0; j <= q; ++j) psi[j].col(col) = z.segment(m * static_cast<Index>(p + 1 + j), m);
        }
        out.generators.push_back({MatrixPolynomial(m, phi), MatrixPolynomial(m, psi)});
    }
    for (const auto& gpair : out.generators) {
        out.certificate_residual =
            std::max(out.certificate_residual, pearson_certificate(u, gpair.Phi, gpair.Psi, N));
    }
    return out;
}

CyclicityReport cyclicity_check(const Functional& u, const Tolerance& tol, std::optional<std::size_t> horizon) {
    CyclicityReport rep;
    HankelProfile hp = hankel_profile(u, 2, tol);
    rep.basis = module_basis(u, 2, 1, horizon, tol);
    if (!hp.all_nonsingular()) {
        rep.verdict = Cyclicity::Inconclusive;
        rep.detail = "some Delta_k, k <= 2, is singular";
        return rep;
    }
    if (rep.basis.rank == 0) {
        rep.verdict = Cyclicity::Trivial;
        rep.detail = "M_{2,1}(u) = {0} on the certificate horizon";
        return rep;
    }
    if (rep.basis.rank > 1) {
        rep.verdict = Cyclicity::NotCyclic;
        rep.detail = "rank " + std::to_string(rep.basis.rank) + " module with Delta_0..Delta_2 nonsingular";
        return rep;
    }
    rep.generator = rep.basis.generators.front();
    if (det_identically_zero(rep.generator->Phi)) {
        rep.verdict = Cyclicity::CyclicDegenerate;
        rep.detail = "rank 1, but det Phi vanishes identically for every generator";
    } else {
        rep.verdict = Cyclicity::Cyclic;
        rep.detail = "rank 1 with det Phi not identically zero";
    }
    return rep;
}

ClassReport scalar_ideal(const Functional& u, const std::optional<PearsonSpec>& known, std::size_t d_max,
                         std::optional<std::size_t> horizon, const Tolerance& tol) {
    tol.validate();
    const Index m = u.dim();
    const Index m2 = m * m;
    ClassReport rep;
    std::size_t dcap = d_max;
    std::size_t qcap = d_max + 1;
    if (known) {
        known->require_nondegenerate(tol);
        DetAdj da = poly_det_adj(known->Phi);
        MatrixPolynomial psi0 = known->Phi * da.adj.derivative() + known->Psi * da.adj;
        rep.seed_alpha = da.det;
        dcap = std::min(dcap, degree_or_zero(da.det));
        qcap = degree_or_zero(psi0);
    }

    for (std::size_t d = 0; d <= dcap; ++d) {
        const std::size_t q = qcap;
        const std::size_t N = horizon.value_or(default_certificate_horizon(m, d, q));
        const Index na = static_cast<Index>(d + 1);
        const Index cols = na + m2 * static_cast<Index>(q + 1);
        // n sum_i alpha_i mu_{n+i-1} + sum_j mu_{n+j} psi_j = 0, vectorized column-major
        CMatrix A = CMatrix::Zero(m2 * static_cast<Index>(N + 1), cols);
        for (std::size_t n = 0; n <= N; ++n) {
            const Index r = m2 * static_cast<Index>(n);
            if (n > 0) {
                for (std::size_t i = 0; i <= d; ++i) {
                    CMatrix mu = u.moment(n + i - 1);
                    A.block(r, static_cast<Index>(i), m2, 1) =
                        static_cast<double>(n) * Eigen::Map<const Eigen::VectorXcd>(mu.data(), m2);
                }
            }
            for (std::size_t j = 0; j <= q; ++j) {
                CMatrix mu = u.moment(n + j);
                for (Index c = 0; c < m; ++c) {
                    A.block(r + c * m, na + m2 * static_cast<Index>(j) + c * m, m, m) = mu;
                }
            }
        }
        NullSpace ns = null_space(A, tol.rel);
        if (ns.basis.cols() == 0) continue;
        // directions whose alpha part survives
        CMatrix scaled = ns.basis;
        for (Index k = 0; k < scaled.cols(); ++k) scaled.col(k).normalize();
        Eigen::JacobiSVD<CMatrix> bsvd(scaled.topRows(na), Eigen::ComputeFullV);
        if (bsvd.singularValues().size() == 0 || bsvd.singularValues()(0) < 1e-6) continue;
        Eigen::VectorXcd z = scaled * bsvd.matrixV().col(0);
        cplx lead = z(na - 1);
        if (std::abs(lead) < 1e-8 * z.head(na).cwiseAbs().maxCoeff()) continue;  // really lower degree
        z /= lead;
        std::vector<cplx> a(z.data(), z.data() + na);
        rep.alpha = MatrixPolynomial::scalar(a, 1);
        std::vector<CMatrix> psi(q + 1, zeros(m));
        for (std::size_t j = 0; j <= q; ++j) {
            psi[j] = Eigen::Map<const CMatrix>(z.data() + na + m2 * static_cast<Index>(j), m, m);
        }
        rep.Psi = MatrixPolynomial(m, psi).trimmed(1e-8);
        rep.certified_to = N;
        rep.residual = pearson_certificate(u, MatrixPolynomial::scalar(a, m), rep.Psi, N);
        const int dega = static_cast<int>(d);
        const int degpsi = rep.Psi.degree() ? static_cast<int>(*rep.Psi.degree()) : -1;
        rep.s = std::max(dega - 2, degpsi - 1);
        return rep;
    }
    throw NoGeneratorFound("no scalar alpha of degree <= " + std::to_string(dcap) +
                           " satisfies the certificate");
}

TildeResult tilde_pearson(const PearsonSpec& spec, const Functional& u, const Tolerance& tol, std::size_t horizon) {
    tol.validate();
    const Index m = spec.dim();
    if (spec.Phi.degree().value_or(0) > 2 || spec.Psi.degree().value_or(0) > 1) {
        throw InvalidParameter("tilde_pearson needs deg Phi <= 2 and deg Psi <= 1");
    }
    const CMatrix psi1 = spec.psi(1);
    if (!is_nonsingular(psi1, tol)) throw TildeBlocked("psi_1 is singular");
    if (!is_nonsingular(psi1 + spec.phi(2), tol)) throw TildeBlocked("psi_1 + phi_2 is singular");
    HankelProfile hp = hankel_profile(u, 3, tol);
    for (std::size_t k = 0; k <= 3; ++k) {
        if (!hp.flags[k].nonsingular) throw TildeBlocked("Delta_" + std::to_string(k) + " is singular");
    }

    const CMatrix inv1 = inverse(psi1, tol);
    const MatrixPolynomial Phi = spec.Phi.right(inv1);
    const MatrixPolynomial Psi = spec.Psi.right(inv1);
    const CMatrix I = identity(m), Z = zeros(m);
    const CMatrix p0 = Phi.coeff(0), p1 = Phi.coeff(1), p2 = Phi.coeff(2), s0 = Psi.coeff(0);
    const CMatrix f2 = p2;
    const CMatrix g1 = I + 2.0 * p2;

    // Coefficients of x^0, x^1, x^2 in Psi Phi~ + Phi Phi~' - Phi Psi~ = 0 (x^3 holds identically),
    // unknowns stacked as [f0; f1; g0].
    CMatrix K(3 * m, 3 * m), R(3 * m, m);
    K << s0, p0, -p0,  //
        I, s0 + p1, -p1,  //
        Z, I + p2, -p2;
    R << Z,  //
        p0 * g1 - 2.0 * p0 * f2,  //
        p1 * g1 - s0 * f2 - 2.0 * p1 * f2;
    CMatrix X;
    try {
        X = solve_left(K, R, tol);
    } catch (const SingularSystem&) {
        throw TildeBlocked("coefficient system for (phi~_0, phi~_1, psi~_0) is singular");
    }
    const CMatrix f0 = X.topRows(m), f1 = X.middleRows(m, m), g0 = X.bottomRows(m);
    MatrixPolynomial Phit(m, {f0, f1, f2});
    MatrixPolynomial Psit(m, {g0, g1});
    if (det_identically_zero(Phit)) throw TildeBlocked("det Phi~ vanishes identically");

    Functional ut = right_multiply(u, Phi);
    TildeResult out{PearsonSpec(Phi, Psi, spec.mu0), PearsonSpec(Phit, Psit, ut.moment(0)), ut};
    MatrixPolynomial ident = Psi * Phit + Phi * Phit.derivative() - Phi * Psit;
    double scale = (Psi * Phit).norm() + (Phi * Phit.derivative()).norm() + (Phi * Psit).norm();
    out.identity_residual = ident.norm() / std::max(scale, 1e-300);
    out.horizon = horizon;
    out.certificate = pearson_certificate(ut, Phit, Psit, horizon);
    return out;
}

std::vector<ChainLink> derivative_chain(const PearsonSpec& spec, const Functional& u, std::size_t depth,
                                        std::size_t N, const Tolerance& tol) {
    std::vector<ChainLink> chain;
    chain.push_back({0, u, spec, 0.0});
    MonicSegment seg = compute_segment(u, N + depth, tol);
    for (std::size_t j = 0; j < depth; ++j) {
        TildeResult t = [&] {
            try {
                return tilde_pearson(chain.back().spec, chain.back().u, tol);
            } catch (const TildeBlocked& e) {
                throw ChainBroken("link " + std::to_string(j) + ": " + e.what(), static_cast<long>(j));
            }
        }();
        ChainLink link{j + 1, t.u_tilde, t.spec, 0.0};
        // monic (j+1)-th derivatives: Q_{n-j-1} = P_n^{(j+1)} (n-j-1)!/n!
        std::vector<MatrixPolynomial> Q;
        for (std::size_t n = j + 1; n < seg.length(); ++n) {
            MatrixPolynomial d = seg.polys[n];
            double c = 1.0;
            for (std::size_t r = 0; r <= j; ++r) {
                d = d.derivative();
                c *= static_cast<double>(n - r);
            }
            d *= cplx(1.0 / c);
            Q.push_back(d);
        }
        link.orthogonality_residual = orthogonality_defect(Q, link.u);
        chain.push_back(std::move(link));
    }
    return chain;
}

}  // namespace mopkit
