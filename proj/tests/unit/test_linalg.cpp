#include <doctest.h>

#include <random>

#include "mopkit/dense.hpp"
#include "mopkit/errors.hpp"
#include "mopkit/matrix_polynomial.hpp"
#include "mopkit/simd.hpp"
#include "oracle.hpp"

using namespace mopkit;

namespace {

CMatrix m2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix M(2, 2);
    M << a, b, c, d;
    return M;
}

MatrixPolynomial example1_phi() {
    // (1 - x^2) I
    return MatrixPolynomial(2, {identity(2), zeros(2), -identity(2)});
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("tolerance validation") {
    CHECK_NOTHROW(Tolerance{}.validate());
    CHECK_THROWS_AS((Tolerance{0.0, 1e-12, 1e10}.validate()), InvalidParameter);
    CHECK_THROWS_AS((Tolerance{1e-9, -1.0, 1e10}.validate()), InvalidParameter);
    CHECK_THROWS_AS((Tolerance{1e-9, 1e-12, 1.0}.validate()), InvalidParameter);
}

TEST_CASE("zero polynomial has no degree and trailing zeros are trimmed") {
    MatrixPolynomial z(2);
    CHECK_FALSE(z.degree().has_value());
    MatrixPolynomial p(2, {identity(2), zeros(2), zeros(2)});
    CHECK(p.degree() == 0u);
    CHECK(p.size() == 1);
}

TEST_CASE("poly_mul: identity, adjugate product, non-commutativity") {
    const MatrixPolynomial I = MatrixPolynomial::constant(identity(2));
    MatrixPolynomial B(2, {m2(1, 2, 3, 4), m2(0, cplx(0, 1), 1, 0)});
    const MatrixPolynomial IB = poly_mul(I, B);
    REQUIRE(IB.size() == B.size());
    for (std::size_t k = 0; k < B.size(); ++k) CHECK(IB.coeff(k).isApprox(B.coeff(k)));

    const MatrixPolynomial Phi = example1_phi();
    const DetAdj da = poly_det_adj(Phi);
    const MatrixPolynomial prod = poly_mul(Phi, da.adj);
    // det = (1 - x^2)^2 = 1 - 2x^2 + x^4
    REQUIRE(da.det.degree() == 4u);
    CHECK(std::abs(da.det.coeff(0)(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(da.det.coeff(2)(0, 0) + 2.0) < 1e-15);
    CHECK(std::abs(da.det.coeff(4)(0, 0) - 1.0) < 1e-15);
    for (std::size_t k = 0; k <= 4; ++k) CHECK((prod.coeff(k) - da.det.coeff(k)(0, 0) * identity(2)).norm() < 1e-15);

    const MatrixPolynomial A = MatrixPolynomial::constant(m2(0, 1, 0, 0));
    const MatrixPolynomial C = MatrixPolynomial::constant(m2(0, 0, 1, 0));
    CHECK(poly_mul(A, C).coeff(0) == m2(1, 0, 0, 0));
    CHECK(poly_mul(C, A).coeff(0) == m2(0, 0, 0, 1));
}

TEST_CASE("poly_mul dimension mismatch") {
    CHECK_THROWS_AS(poly_mul(MatrixPolynomial::constant(identity(2)), MatrixPolynomial::constant(identity(3))),
                    DimensionMismatch);
}

TEST_CASE("poly_det_adj examples") {
    // x I, m = 2
    const MatrixPolynomial xI = MatrixPolynomial::monomial(identity(2), 1);
    const DetAdj a = poly_det_adj(xI);
    CHECK(a.det.degree() == 2u);
    CHECK(a.det.coeff(2)(0, 0) == cplx(1.0));
    CHECK(a.adj.degree() == 1u);
    CHECK(a.adj.coeff(1) == identity(2));

    // example2 with a = 1: [[3, 0], [-x, 1]] has det 3
    const MatrixPolynomial phi2(2, {m2(3, 0, 0, 1), m2(0, 0, -1, 0)});
    const DetAdj b = poly_det_adj(phi2);
    CHECK(b.det.degree() == 0u);
    CHECK(std::abs(b.det.coeff(0)(0, 0) - 3.0) < 1e-15);

    // example4 with a = 1, r = 0: [[x, -1], [0, 3x]] has det 3x^2
    const MatrixPolynomial phi4(2, {m2(0, -1, 0, 0), m2(1, 0, 0, 3)});
    const DetAdj c = poly_det_adj(phi4);
    CHECK(c.det.degree() == 2u);
    CHECK(std::abs(c.det.coeff(2)(0, 0) - 3.0) < 1e-15);
    CHECK(std::abs(c.det.coeff(0)(0, 0)) < 1e-15);

    // m = 1 convention: adj = 1
    const DetAdj d = poly_det_adj(MatrixPolynomial::scalar({2.0, 1.0}));
    CHECK(d.adj.degree() == 0u);
    CHECK(d.adj.coeff(0)(0, 0) == cplx(1.0));
}

TEST_CASE("solve_block_row examples") {
    const Tolerance tol;
    const CMatrix B = m2(1, 2, cplx(0, 1), 4);
    const BlockRow X = solve_block_row({{identity(2)}}, {B}, tol);
    CHECK(X[0].isApprox(B));

    // scalar Hermite, mu = 1, 0, 1/2, 0: (pi_0, pi_1) Delta_1 = -(mu_2, mu_3)
    auto c = [](double v) { return CMatrix::Constant(1, 1, v); };
    const BlockRow h = solve_block_row({{c(1), c(0)}, {c(0), c(0.5)}}, {c(-0.5), c(0)}, tol);
    CHECK(std::abs(h[0](0, 0) + 0.5) < 1e-15);
    CHECK(std::abs(h[1](0, 0)) < 1e-15);

    // example2, a = 1: pi_0 of P_1 = -mu_1 mu_0^{-1}; exact value from the sympy oracle
    const CMatrix mu0 = oracle::sqrt_pi * m2(1.5, 0, 0, 1);
    const CMatrix mu1 = oracle::sqrt_pi * m2(0, 0.5, 0.5, 0);
    const BlockRow e = solve_block_row({{mu0}}, {-mu1}, tol);
    CHECK(oracle::rel(e[0], m2(0, -0.5, -1.0 / 3.0, 0)) < 1e-14);
}

TEST_CASE("solve_block_row flags singular systems") {
    CHECK_THROWS_AS(solve_block_row({{m2(1, 0, 0, 0)}}, {identity(2)}, Tolerance{}), SingularSystem);
}

TEST_CASE("psd_check verdicts") {
    const Tolerance tol;
    CHECK(psd_check(identity(2), tol) == Definiteness::PositiveDefinite);
    CHECK(psd_check(m2(1, 0, 0, -1), tol) == Definiteness::HermitianIndefinite);
    CHECK(psd_check(m2(0, 1, 0, 0), tol) == Definiteness::NonHermitian);
}

TEST_CASE("simultaneous unitary diagonalizer") {
    const Tolerance tol;
    auto T1 = simultaneous_unitary_diagonalizer({m2(1, 0, 0, 2), m2(3, 0, 0, 4)}, tol);
    REQUIRE(T1.has_value());
    CHECK(offdiag_norm(*T1 * m2(1, 0, 0, 2) * T1->adjoint()) < 1e-12);

    const CMatrix flip = m2(0, 1, 1, 0);
    auto T2 = simultaneous_unitary_diagonalizer({flip, identity(2)}, tol);
    REQUIRE(T2.has_value());
    CHECK(offdiag_norm(*T2 * flip * T2->adjoint()) < 1e-12);
    CHECK((*T2 * T2->adjoint() - identity(2)).norm() < 1e-12);
    // eigenvalues of the flip are +-1
    const CMatrix D = *T2 * flip * T2->adjoint();
    CHECK(std::abs(std::abs(D(0, 0)) - 1.0) < 1e-12);

    CHECK_FALSE(simultaneous_unitary_diagonalizer({flip, m2(1, 0, 0, -1)}, tol).has_value());
    CHECK_THROWS_AS(simultaneous_unitary_diagonalizer({m2(0, 1, 0, 0)}, tol), NonHermitianInput);
}

TEST_CASE("adjoint is an involution on polynomials") {
    MatrixPolynomial P(2, {m2(1, cplx(0, 2), 3, 4), m2(cplx(1, 1), 0, 0, cplx(0, -1))});
    const MatrixPolynomial Q = P.adjoint().adjoint();
    for (std::size_t k = 0; k < P.size(); ++k) CHECK(Q.coeff(k) == P.coeff(k));
}

}  // TEST_SUITE

TEST_SUITE("simd") {

TEST_CASE("scalar and AVX2 kernels agree") {
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> U(-1, 1);
    for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 16u, 33u}) {
        std::vector<cplx> x(n), y(n);
        for (auto& v : x) v = {U(eng), U(eng)};
        for (auto& v : y) v = {U(eng), U(eng)};
        const cplx a{U(eng), U(eng)};
        auto y1 = y, y2 = y;
        simd::scalar::caxpy(y1, a, x);
        if (simd::avx2_available()) {
            simd::avx2::caxpy(y2, a, x);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15 * (1 + std::abs(y1[i])));
            const auto s = simd::scalar::argmax_abs2(x), v = simd::avx2::argmax_abs2(x);
            CHECK(s.index == v.index);
            CHECK(s.value == doctest::Approx(v.value).epsilon(1e-15));
        }
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - (y[i] + a * x[i])) < 1e-15);
    }
}

TEST_CASE("block solves agree across ISAs") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> U(-1, 1);
    const Index m = 3, p = 4;
    BlockMatrix H(p, std::vector<CMatrix>(p));
    BlockRow rhs(p);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            H[i][j] = CMatrix::NullaryExpr(m, m, [&] { return cplx(U(eng), U(eng)); });
            if (i == j) H[i][j] += 4.0 * identity(m);
        }
        rhs[i] = CMatrix::NullaryExpr(m, m, [&] { return cplx(U(eng), U(eng)); });
    }
    const simd::Isa before = simd::active_isa();
    simd::set_isa(simd::Isa::Scalar);
    const BlockRow a = solve_block_row(H, rhs, Tolerance{});
    simd::set_isa(simd::Isa::Avx2);
    const BlockRow b = solve_block_row(H, rhs, Tolerance{});
    simd::set_isa(before);
    for (Index i = 0; i < p; ++i) CHECK((a[i] - b[i]).norm() <= 1e-13 * a[i].norm());
    CHECK(simd::isa_name(simd::Isa::Scalar) != simd::isa_name(simd::Isa::Avx2));
}

}  // TEST_SUITE
