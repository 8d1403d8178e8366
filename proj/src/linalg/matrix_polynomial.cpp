#include "mopkit/matrix_polynomial.hpp"

#include <algorithm>
#include <string>

#include "mopkit/errors.hpp"

namespace mopkit {

namespace {

void require_same_dim(Index a, Index b) {
    if (a != b)
        throw DimensionMismatch("matrix polynomial dims " + std::to_string(a) + " and " +
                                std::to_string(b));
}

// Scalar polynomial helpers for the cofactor expansion.
using SPoly = std::vector<cplx>;

SPoly smul(const SPoly& a, const SPoly& b) {
    if (a.empty() || b.empty()) return {};
    SPoly r(a.size() + b.size() - 1, cplx(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

void sadd(SPoly& acc, const SPoly& b, double sign) {
    if (acc.size() < b.size()) acc.resize(b.size(), cplx(0));
    for (std::size_t i = 0; i < b.size(); ++i) acc[i] += sign * b[i];
}

using SMat = std::vector<std::vector<SPoly>>;

SPoly det_rec(const SMat& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    if (n == 2) {
        SPoly d = smul(a[0][0], a[1][1]);
        sadd(d, smul(a[0][1], a[1][0]), -1.0);
        return d;
    }
    SPoly d;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j].empty()) continue;
        SMat minor(n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) minor[r - 1].push_back(a[r][c]);
        sadd(d, smul(a[0][j], det_rec(minor)), (j % 2 == 0) ? 1.0 : -1.0);
    }
    return d;
}

}  // namespace

MatrixPolynomial::MatrixPolynomial(Index dim) : dim_(dim) {
    if (dim < 1) throw DimensionMismatch("matrix polynomial dim must be >= 1");
}

MatrixPolynomial::MatrixPolynomial(Index dim, std::vector<CMatrix> coeffs)
    : dim_(dim), coeffs_(std::move(coeffs)) {
    if (dim < 1) throw DimensionMismatch("matrix polynomial dim must be >= 1");
    for (const auto& c : coeffs_)
        if (c.rows() != dim || c.cols() != dim)
            throw DimensionMismatch("coefficient shape does not match dim " + std::to_string(dim));
    trim();
}

MatrixPolynomial MatrixPolynomial::constant(const CMatrix& c) {
    return MatrixPolynomial(c.rows(), {c});
}

MatrixPolynomial MatrixPolynomial::monomial(const CMatrix& c, std::size_t k) {
    std::vector<CMatrix> cs(k + 1, CMatrix::Zero(c.rows(), c.cols()));
    cs[k] = c;
    return MatrixPolynomial(c.rows(), std::move(cs));
}

MatrixPolynomial MatrixPolynomial::scalar(const std::vector<cplx>& a, Index dim) {
    std::vector<CMatrix> cs;
    cs.reserve(a.size());
    for (cplx v : a) cs.push_back(v * CMatrix::Identity(dim, dim));
    return MatrixPolynomial(dim, std::move(cs));
}

void MatrixPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back().isZero(0.0)) coeffs_.pop_back();
}

std::optional<std::size_t> MatrixPolynomial::degree() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.size() - 1;
}

CMatrix MatrixPolynomial::coeff(std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : CMatrix::Zero(dim_, dim_);
}

CMatrix MatrixPolynomial::operator()(cplx x) const {
    CMatrix acc = CMatrix::Zero(dim_, dim_);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

MatrixPolynomial MatrixPolynomial::derivative() const {
    std::vector<CMatrix> cs;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) cs.push_back(static_cast<double>(k) * coeffs_[k]);
    return MatrixPolynomial(dim_, std::move(cs));
}

MatrixPolynomial MatrixPolynomial::adjoint() const {
    std::vector<CMatrix> cs;
    for (const auto& c : coeffs_) cs.push_back(c.adjoint());
    return MatrixPolynomial(dim_, std::move(cs));
}

MatrixPolynomial MatrixPolynomial::shift(std::size_t k) const {
    if (is_zero()) return *this;
    std::vector<CMatrix> cs(k, CMatrix::Zero(dim_, dim_));
    cs.insert(cs.end(), coeffs_.begin(), coeffs_.end());
    return MatrixPolynomial(dim_, std::move(cs));
}

MatrixPolynomial MatrixPolynomial::left(const CMatrix& c) const {
    require_same_dim(dim_, c.rows());
    std::vector<CMatrix> cs;
    for (const auto& a : coeffs_) cs.push_back(c * a);
    return MatrixPolynomial(dim_, std::move(cs));
}

MatrixPolynomial MatrixPolynomial::right(const CMatrix& c) const {
    require_same_dim(dim_, c.rows());
    std::vector<CMatrix> cs;
    for (const auto& a : coeffs_) cs.push_back(a * c);
    return MatrixPolynomial(dim_, std::move(cs));
}

MatrixPolynomial MatrixPolynomial::trimmed(double tol) const {
    double big = 0.0;
    for (const auto& c : coeffs_) big = std::max(big, c.norm());
    std::vector<CMatrix> cs = coeffs_;
    while (!cs.empty() && cs.back().norm() <= tol * big) cs.pop_back();
    return MatrixPolynomial(dim_, std::move(cs));
}

double MatrixPolynomial::norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += c.squaredNorm();
    return std::sqrt(s);
}

MatrixPolynomial& MatrixPolynomial::operator+=(const MatrixPolynomial& o) {
    require_same_dim(dim_, o.dim_);
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), CMatrix::Zero(dim_, dim_));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
}

MatrixPolynomial& MatrixPolynomial::operator-=(const MatrixPolynomial& o) {
    require_same_dim(dim_, o.dim_);
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), CMatrix::Zero(dim_, dim_));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
}

MatrixPolynomial& MatrixPolynomial::operator*=(cplx s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
}

MatrixPolynomial operator+(MatrixPolynomial a, const MatrixPolynomial& b) { return a += b; }
MatrixPolynomial operator-(MatrixPolynomial a, const MatrixPolynomial& b) { return a -= b; }
MatrixPolynomial operator-(MatrixPolynomial a) { return a *= cplx(-1.0); }
MatrixPolynomial operator*(cplx s, MatrixPolynomial a) { return a *= s; }
MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b) { return poly_mul(a, b); }

MatrixPolynomial poly_mul(const MatrixPolynomial& a, const MatrixPolynomial& b) {
    require_same_dim(a.dim(), b.dim());
    if (a.is_zero() || b.is_zero()) return MatrixPolynomial(a.dim());
    const auto& ac = a.coeffs();
    const auto& bc = b.coeffs();
    std::vector<CMatrix> cs(ac.size() + bc.size() - 1, CMatrix::Zero(a.dim(), a.dim()));
    for (std::size_t i = 0; i < ac.size(); ++i)
        for (std::size_t j = 0; j < bc.size(); ++j) cs[i + j] += ac[i] * bc[j];
    return MatrixPolynomial(a.dim(), std::move(cs));
}

MatrixPolynomial scalar_mul(const MatrixPolynomial& s, const MatrixPolynomial& p) {
    if (s.dim() != 1) throw DimensionMismatch("scalar_mul expects a dim-1 polynomial");
    std::vector<cplx> sc;
    for (const auto& c : s.coeffs()) sc.push_back(c(0, 0));
    return poly_mul(MatrixPolynomial::scalar(sc, p.dim()), p);
}

DetAdj poly_det_adj(const MatrixPolynomial& p) {
    const Index m = p.dim();
    const std::size_t len = p.size();
    SMat a(m, std::vector<SPoly>(m));
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            SPoly e(len);
            for (std::size_t k = 0; k < len; ++k) e[k] = p.coeffs()[k](i, j);
            while (!e.empty() && e.back() == cplx(0)) e.pop_back();
            a[i][j] = std::move(e);
        }

    auto to_poly = [](const SPoly& s) {
        std::vector<CMatrix> cs;
        for (cplx v : s) cs.push_back(CMatrix::Constant(1, 1, v));
        return MatrixPolynomial(1, std::move(cs));
    };

    if (m == 1) return {to_poly(a[0][0]), MatrixPolynomial::constant(identity(1))};

    // adj(i, j) = (-1)^{i+j} det(minor with row j and column i removed)
    std::vector<std::vector<SPoly>> adj(m, std::vector<SPoly>(m));
    std::size_t adj_len = 0;
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            SMat minor;
            for (Index r = 0; r < m; ++r) {
                if (r == j) continue;
                std::vector<SPoly> row;
                for (Index c = 0; c < m; ++c)
                    if (c != i) row.push_back(a[r][c]);
                minor.push_back(std::move(row));
            }
            SPoly d = det_rec(minor);
            if ((i + j) % 2) for (auto& v : d) v = -v;
            adj_len = std::max(adj_len, d.size());
            adj[i][j] = std::move(d);
        }
    std::vector<CMatrix> cs(adj_len, CMatrix::Zero(m, m));
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j)
            for (std::size_t k = 0; k < adj[i][j].size(); ++k) cs[k](i, j) = adj[i][j][k];
    return {to_poly(det_rec(a)), MatrixPolynomial(m, std::move(cs))};
}

}  // namespace mopkit
