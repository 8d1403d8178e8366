#pragma once

#include <optional>
#include <vector>

#include "mopkit/types.hpp"

namespace mopkit {

// Polynomial in x with square complex-matrix coefficients; coeffs()[k] multiplies x^k.
// Trailing exactly-zero coefficients are always trimmed, so the zero polynomial has no
// coefficients and degree() == nullopt.
class MatrixPolynomial {
public:
    explicit MatrixPolynomial(Index dim = 1);
    MatrixPolynomial(Index dim, std::vector<CMatrix> coeffs);

    static MatrixPolynomial constant(const CMatrix& c);
    static MatrixPolynomial monomial(const CMatrix& c, std::size_t k);
    // a_0 + a_1 x + ... times the identity of size dim.
    static MatrixPolynomial scalar(const std::vector<cplx>& a, Index dim = 1);

    Index dim() const { return dim_; }
    std::optional<std::size_t> degree() const;
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<CMatrix>& coeffs() const { return coeffs_; }
    // Coefficient of x^k; zero matrix beyond the degree.
    CMatrix coeff(std::size_t k) const;
    std::size_t size() const { return coeffs_.size(); }

    CMatrix operator()(cplx x) const;
    MatrixPolynomial derivative() const;
    // Coefficientwise conjugate transpose (the polynomial Q* of the functional algebra).
    MatrixPolynomial adjoint() const;
    // x^k * P
    MatrixPolynomial shift(std::size_t k) const;
    MatrixPolynomial left(const CMatrix& c) const;
    MatrixPolynomial right(const CMatrix& c) const;
    // Drop coefficients whose norm is <= tol * (largest coefficient norm).
    MatrixPolynomial trimmed(double tol) const;
    // Frobenius norm over all coefficients.
    double norm() const;

    MatrixPolynomial& operator+=(const MatrixPolynomial& o);
    MatrixPolynomial& operator-=(const MatrixPolynomial& o);
    MatrixPolynomial& operator*=(cplx s);

private:
    void trim();

    Index dim_;
    std::vector<CMatrix> coeffs_;
};

MatrixPolynomial operator+(MatrixPolynomial a, const MatrixPolynomial& b);
MatrixPolynomial operator-(MatrixPolynomial a, const MatrixPolynomial& b);
MatrixPolynomial operator-(MatrixPolynomial a);
MatrixPolynomial operator*(cplx s, MatrixPolynomial a);
MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b);

MatrixPolynomial poly_mul(const MatrixPolynomial& a, const MatrixPolynomial& b);

// Scalar (dim 1) polynomial s times P, i.e. s(x) I * P(x).
MatrixPolynomial scalar_mul(const MatrixPolynomial& s, const MatrixPolynomial& p);

struct DetAdj {
    MatrixPolynomial det;  // dim 1
    MatrixPolynomial adj;
};

// Cofactor expansion over the polynomial ring. For m = 1, adj = I.
DetAdj poly_det_adj(const MatrixPolynomial& p);

}  // namespace mopkit
