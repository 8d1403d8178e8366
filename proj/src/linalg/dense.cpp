#include "mopkit/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "mopkit/errors.hpp"
#include "mopkit/simd.hpp"

namespace mopkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Complete-pivoting Gaussian elimination on [A | B], row-major. Fills X when the
// system passes the condition test.
Elimination eliminate(const CMatrix& A, const CMatrix* B, CMatrix* X, const Tolerance& tol) {
    const Index n = A.rows();
    if (A.cols() != n) throw DimensionMismatch("elimination needs a square matrix");
    const Index r = B ? B->cols() : 0;
    const Index w = n + r;
    std::vector<cplx> buf(static_cast<std::size_t>(n * w));
    auto at = [&](Index i, Index j) -> cplx& { return buf[static_cast<std::size_t>(i * w + j)]; };
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) at(i, j) = A(i, j);
        for (Index j = 0; j < r; ++j) at(i, n + j) = (*B)(i, j);
    }
    std::vector<Index> colperm(static_cast<std::size_t>(n));
    std::iota(colperm.begin(), colperm.end(), Index{0});

    Elimination out;
    double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
        Index pi = k, pj = k;
        double best = -1.0;
        for (Index i = k; i < n; ++i) {
            std::span<const cplx> row(&at(i, k), static_cast<std::size_t>(n - k));
            const auto am = simd::argmax_abs2(row);
            if (am.value > best) {
                best = am.value;
                pi = i;
                pj = k + static_cast<Index>(am.index);
            }
        }
        if (!(best > 0.0)) {
            out.singular = true;
            out.cond_estimate = std::numeric_limits<double>::infinity();
            return out;
        }
        if (pi != k)
            for (Index j = 0; j < w; ++j) std::swap(at(k, j), at(pi, j));
        if (pj != k) {
            for (Index i = 0; i < n; ++i) std::swap(at(i, k), at(i, pj));
            std::swap(colperm[static_cast<std::size_t>(k)], colperm[static_cast<std::size_t>(pj)]);
        }
        const cplx piv = at(k, k);
        pmax = std::max(pmax, std::abs(piv));
        pmin = std::min(pmin, std::abs(piv));
        std::span<const cplx> prow(&at(k, k + 1), static_cast<std::size_t>(w - k - 1));
        for (Index i = k + 1; i < n; ++i) {
            const cplx l = at(i, k) / piv;
            at(i, k) = 0.0;
            if (l == cplx(0)) continue;
            simd::caxpy(std::span<cplx>(&at(i, k + 1), static_cast<std::size_t>(w - k - 1)), -l, prow);
        }
    }
    out.cond_estimate = n == 0 ? 1.0 : pmax / pmin;
    out.singular = !(out.cond_estimate <= tol.cond_max);
    if (out.singular || !X) return out;

    CMatrix Y(n, r);
    for (Index k = n - 1; k >= 0; --k)
        for (Index c = 0; c < r; ++c) {
            cplx s = at(k, n + c);
            for (Index j = k + 1; j < n; ++j) s -= at(k, j) * Y(j, c);
            Y(k, c) = s / at(k, k);
        }
    X->resize(n, r);
    for (Index k = 0; k < n; ++k) X->row(colperm[static_cast<std::size_t>(k)]) = Y.row(k);
    return out;
}

std::string cond_message(const char* what, double cond) {
    std::ostringstream os;
    os << what << ": condition estimate " << cond << " exceeds the ceiling";
    return os.str();
}

double max_abs(const CMatrix& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

// One scalar per block row, then per block column (keeps intra-block structure intact).
void block_scale(CMatrix& F, Index m, std::size_t p, std::vector<double>& rs, std::vector<double>& cs) {
    rs.assign(p, 1.0);
    cs.assign(p, 1.0);
    for (std::size_t i = 0; i < p; ++i) {
        const double s = max_abs(F.middleRows(static_cast<Index>(i) * m, m));
        if (s > 0) rs[i] = 1.0 / s;
        F.middleRows(static_cast<Index>(i) * m, m) *= rs[i];
    }
    for (std::size_t j = 0; j < p; ++j) {
        const double s = max_abs(F.middleCols(static_cast<Index>(j) * m, m));
        if (s > 0) cs[j] = 1.0 / s;
        F.middleCols(static_cast<Index>(j) * m, m) *= cs[j];
    }
}

}  // namespace

Elimination analyze_blocks(const BlockMatrix& H, const Tolerance& tol) {
    if (H.empty()) return {};
    CMatrix F = flatten(H);
    std::vector<double> rs, cs;
    block_scale(F, H[0][0].rows(), H.size(), rs, cs);
    return analyze(F, tol);
}

Elimination analyze(const CMatrix& A, const Tolerance& tol) { return eliminate(A, nullptr, nullptr, tol); }

bool is_nonsingular(const CMatrix& A, const Tolerance& tol) { return !analyze(A, tol).singular; }

CMatrix solve_left(const CMatrix& A, const CMatrix& B, const Tolerance& tol) {
    if (B.rows() != A.rows()) throw DimensionMismatch("solve_left: row count mismatch");
    CMatrix X;
    const auto e = eliminate(A, &B, &X, tol);
    if (e.singular) throw SingularSystem(cond_message("solve", e.cond_estimate));
    return X;
}

CMatrix solve_right(const CMatrix& A, const CMatrix& B, const Tolerance& tol) {
    if (B.cols() != A.rows()) throw DimensionMismatch("solve_right: column count mismatch");
    return solve_left(A.transpose(), B.transpose(), tol).transpose();
}

CMatrix inverse(const CMatrix& A, const Tolerance& tol) {
    return solve_left(A, CMatrix::Identity(A.rows(), A.cols()), tol);
}

CMatrix flatten(const BlockMatrix& H) {
    const std::size_t p = H.size();
    if (p == 0) return CMatrix(0, 0);
    const Index m = H[0][0].rows();
    CMatrix F(m * static_cast<Index>(p), m * static_cast<Index>(p));
    for (std::size_t i = 0; i < p; ++i) {
        if (H[i].size() != p) throw DimensionMismatch("block matrix is not square");
        for (std::size_t j = 0; j < p; ++j) {
            if (H[i][j].rows() != m || H[i][j].cols() != m) throw DimensionMismatch("block shape mismatch");
            F.block(static_cast<Index>(i) * m, static_cast<Index>(j) * m, m, m) = H[i][j];
        }
    }
    return F;
}

BlockRow solve_block_row(const BlockMatrix& H, const BlockRow& rhs, const Tolerance& tol) {
    const std::size_t p = H.size();
    if (rhs.size() != p) throw DimensionMismatch("solve_block_row: rhs block count mismatch");
    if (p == 0) return {};
    const Index m = H[0][0].rows();
    CMatrix F = flatten(H);
    CMatrix R(m, m * static_cast<Index>(p));
    for (std::size_t j = 0; j < p; ++j) {
        if (rhs[j].rows() != m || rhs[j].cols() != m) throw DimensionMismatch("rhs block shape mismatch");
        R.block(0, static_cast<Index>(j) * m, m, m) = rhs[j];
    }

    std::vector<double> rs, cs;
    block_scale(F, m, p, rs, cs);
    // X H = R  with  F = Dr H Dc  =>  (X Dr^{-1}) F = R Dc
    CMatrix Rs = R;
    for (std::size_t j = 0; j < p; ++j) Rs.middleCols(static_cast<Index>(j) * m, m) *= cs[j];
    CMatrix Y = solve_right(F, Rs, tol);
    for (std::size_t i = 0; i < p; ++i) Y.middleCols(static_cast<Index>(i) * m, m) *= rs[i];

    const CMatrix Hf = flatten(H);
    const double resid = (Y * Hf - R).norm();
    const double scale = Y.norm() * Hf.norm() + R.norm();
    if (resid > 10.0 * tol.rel * scale + tol.abs)
        throw SingularSystem("solve_block_row: residual check failed");

    BlockRow X(p);
    for (std::size_t j = 0; j < p; ++j) X[j] = Y.block(0, static_cast<Index>(j) * m, m, m);
    return X;
}

const char* to_string(Definiteness d) {
    switch (d) {
        case Definiteness::PositiveDefinite: return "positive definite";
        case Definiteness::HermitianIndefinite: return "hermitian, not positive definite";
        case Definiteness::NonHermitian: return "non-hermitian";
    }
    return "?";
}

bool is_hermitian(const CMatrix& A, const Tolerance& tol) {
    if (A.rows() != A.cols()) return false;
    return (A - A.adjoint()).norm() <= tol.abs + tol.rel * A.norm();
}

Definiteness psd_check(const CMatrix& A, const Tolerance& tol) {
    if (!is_hermitian(A, tol)) return Definiteness::NonHermitian;
    const CMatrix H = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double big = ev.cwiseAbs().maxCoeff();
    // eigenvalues below a few ulps of the spectral scale are numerically zero
    const double floor = std::max(tol.abs, 64.0 * kEps * big);
    return ev.minCoeff() > floor ? Definiteness::PositiveDefinite : Definiteness::HermitianIndefinite;
}

std::optional<CMatrix> simultaneous_unitary_diagonalizer(const std::vector<CMatrix>& As,
                                                         const Tolerance& tol) {
    if (As.empty()) return std::nullopt;
    const Index m = As[0].rows();
    for (std::size_t i = 0; i < As.size(); ++i)
        if (!is_hermitian(As[i], tol))
            throw NonHermitianInput("matrix " + std::to_string(i) + " is not hermitian");
    for (std::size_t i = 0; i < As.size(); ++i)
        for (std::size_t j = i + 1; j < As.size(); ++j) {
            const double c = (As[i] * As[j] - As[j] * As[i]).norm();
            if (c > 10.0 * (tol.abs + tol.rel * As[i].norm() * As[j].norm())) return std::nullopt;
        }

    auto diagonal_enough = [&](const CMatrix& T) {
        for (const auto& A : As)
            if (offdiag_norm(T * A * T.adjoint()) > 10.0 * (tol.abs + tol.rel * A.norm())) return false;
        return true;
    };

    // A generic real combination separates the joint eigenspaces; retry on coincidences.
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> coef(0.5, 1.5);
    for (int attempt = 0; attempt < 16; ++attempt) {
        CMatrix C = CMatrix::Zero(m, m);
        for (const auto& A : As) {
            const double nA = A.norm();
            if (nA > 0) C += (coef(rng) / nA) * A;
        }
        C = 0.5 * (C + C.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(C);
        const CMatrix T = es.eigenvectors().adjoint();
        if (diagonal_enough(T)) return T;
    }
    return std::nullopt;
}

}  // namespace mopkit
