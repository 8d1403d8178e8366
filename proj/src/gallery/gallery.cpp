#include "mopkit/gallery.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "gallery/quadrature.hpp"
#include "gallery/special.hpp"
#include "mopkit/errors.hpp"

namespace mopkit::gallery {

namespace {

using SPoly = std::vector<cplx>;
using Kernel = std::function<cplx(std::size_t)>;

constexpr double kPi = std::numbers::pi;
const cplx kTwoPiI{0.0, 2.0 * std::numbers::pi};

// Matrix polynomial from row-major scalar polynomial entries.
MatrixPolynomial matpoly(Index m, const std::vector<SPoly>& entries) {
    std::size_t len = 0;
    for (const auto& e : entries) len = std::max(len, e.size());
    std::vector<CMatrix> c(len, zeros(m));
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) {
            const SPoly& e = entries[static_cast<std::size_t>(i * m + j)];
            for (std::size_t k = 0; k < e.size(); ++k) c[k](i, j) = e[k];
        }
    return MatrixPolynomial(m, std::move(c));
}

// Moments of W(x) = w(x) R(x) with polynomial entries, from the scalar moments of w.
Functional poly_weight(const std::string& label, Index m, std::vector<SPoly> entries, Kernel w) {
    return Functional::from_oracle(m, label, [m, entries = std::move(entries), w = std::move(w)](std::size_t n) {
        CMatrix mu = CMatrix::Zero(m, m);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j) {
                const SPoly& e = entries[static_cast<std::size_t>(i * m + j)];
                cplx s = 0.0;
                for (std::size_t d = 0; d < e.size(); ++d)
                    if (e[d] != 0.0) s += e[d] * w(n + d);
                mu(i, j) = s;
            }
        return mu;
    });
}

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix M(2, 2);
    M << a, b, c, d;
    return M;
}

CMatrix diag2(cplx a, cplx b) { return mat2(a, 0.0, 0.0, b); }

void require(bool ok, const std::string& msg) {
    if (!ok) throw InvalidParameter(msg);
}

// integral over R of x^k e^{a x - b x^2}, Re b > 0
cplx shifted_gauss(cplx a, cplx b, std::size_t k) {
    const cplx shift = a / (2.0 * b);
    std::vector<cplx> spow(k + 1, 1.0);
    for (std::size_t i = 1; i <= k; ++i) spow[i] = spow[i - 1] * shift;
    cplx s = 0.0;
    double binom = 1.0;  // C(k, j)
    for (std::size_t j = 0; j <= k; ++j) {
        if (j % 2 == 0) {
            const double h = (static_cast<double>(j) + 1.0) / 2.0;
            s += binom * spow[k - j] * special::gamma(h) * std::exp(-h * std::log(b));
        }
        binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
    return std::exp(a * a / (4.0 * b)) * s;
}

// integral over (-1, 1) of (1+x)^a (1-x)^b x^k, optionally against log(1+x) or log(1-x)
enum class LogKind { None, OnePlus, OneMinus };
cplx jacobi_integral(cplx a, cplx b, std::size_t k, LogKind lk = LogKind::None) {
    auto f = [=](double x, double p, double q) -> cplx {
        if (p <= 0.0 || q <= 0.0) return 0.0;
        const double lp = std::log(p), lq = std::log(q);
        cplx v = std::exp(a * lp + b * lq) * std::pow(x, static_cast<double>(k));
        if (lk == LogKind::OnePlus) v *= lp;
        if (lk == LogKind::OneMinus) v *= lq;
        return v;
    };
    return quad::tanh_sinh(f, 1e-13).value;
}

// S with S^{-1} A S and S^{-1} B S diagonal; eigenvalue pairs returned alongside.
struct JointEigen {
    CMatrix S, Sinv;
    std::vector<cplx> la, lb;
};

JointEigen joint_eigen(const CMatrix& A, const CMatrix& B) {
    require(A.rows() == A.cols() && B.rows() == A.rows() && B.cols() == A.cols(), "A and B must be square, same size");
    const double scale = std::max(1.0, A.norm() * B.norm());
    require((A * B - B * A).norm() <= 1e-12 * scale, "A and B must commute");
    Eigen::ComplexEigenSolver<CMatrix> es(A + 0.6180339887498949 * B);
    JointEigen je;
    je.S = es.eigenvectors();
    Eigen::FullPivLU<CMatrix> lu(je.S);
    require(lu.isInvertible() && std::abs(lu.determinant()) > 1e-10, "A and B must be jointly diagonalizable");
    je.Sinv = lu.inverse();
    CMatrix DA = je.Sinv * A * je.S, DB = je.Sinv * B * je.S;
    require(offdiag_norm(DA) <= 1e-9 * std::max(1.0, A.norm()) && offdiag_norm(DB) <= 1e-9 * std::max(1.0, B.norm()),
            "A and B must be jointly diagonalizable");
    for (Index i = 0; i < A.rows(); ++i) {
        je.la.push_back(DA(i, i));
        je.lb.push_back(DB(i, i));
    }
    return je;
}

Functional joint_weight(const std::string& label, const JointEigen& je, std::function<cplx(cplx, cplx, std::size_t)> m) {
    const Index dim = je.S.rows();
    return Functional::from_oracle(dim, label, [je, m = std::move(m), dim](std::size_t n) {
        CMatrix D = CMatrix::Zero(dim, dim);
        for (Index i = 0; i < dim; ++i) D(i, i) = m(je.la[static_cast<std::size_t>(i)], je.lb[static_cast<std::size_t>(i)], n);
        return CMatrix(je.S * D * je.Sinv);
    });
}

void attach_zero_class(GalleryEntry& e, const ZeroClassSpec& zc) {
    e.zero_class = zc;
    e.pearson = zc.to_pearson();
    e.class_pair = zc.to_pearson();
    e.expected["class"] = 0;
}

CMatrix mu0_of(const Functional& u) { return u.moment(0); }

// ---- scalar classical -----------------------------------------------------------------

GalleryEntry build_hermite(const Params&) {
    GalleryEntry e;
    e.functional = Functional::from_oracle(1, "hermite", [](std::size_t n) {
        return CMatrix::Constant(1, 1, gaussian_moments(n) / std::sqrt(kPi));
    });
    attach_zero_class(e, ZeroClassSpec({1.0, 0.0, 0.0}, zeros(1), CMatrix::Constant(1, 1, -2.0), identity(1)));
    e.expected["E3"] = 0.75;
    return e;
}

GalleryEntry build_laguerre(const Params& p) {
    const double r = p.real("r", 0.0);
    require(r > -1.0, "laguerre needs r > -1");
    GalleryEntry e;
    e.functional = Functional::from_oracle(1, "laguerre", [r](std::size_t n) {
        return CMatrix::Constant(1, 1, gamma_moments(r, n));
    });
    attach_zero_class(e, ZeroClassSpec({0.0, 1.0, 0.0}, CMatrix::Constant(1, 1, r + 1.0), CMatrix::Constant(1, 1, -1.0),
                                       mu0_of(e.functional)));
    if (r == 0.0) e.expected["E2"] = 4.0;
    return e;
}

GalleryEntry build_jacobi(const Params& p) {
    const double r = p.real("r", 0.5), s = p.real("s", 1.5);
    require(r > -1.0 && s > -1.0, "jacobi needs r, s > -1");
    GalleryEntry e;
    e.functional = Functional::from_oracle(1, "jacobi", [r, s](std::size_t n) {
        return CMatrix::Constant(1, 1, jacobi_integral(r, s, n));
    });
    attach_zero_class(e, ZeroClassSpec({1.0, 0.0, -1.0}, CMatrix::Constant(1, 1, r - s),
                                       CMatrix::Constant(1, 1, -(r + s + 2.0)), mu0_of(e.functional)));
    return e;
}

int bessel_r(const Params& p) {
    const double r = p.real("r", 0.0);
    require(r >= -1.0 && r == std::floor(r), "bessel needs an integer r >= -1");
    return static_cast<int>(r);
}

GalleryEntry build_bessel(const Params& p) {
    const int r = bessel_r(p);
    GalleryEntry e;
    const CMatrix one = identity(1);
    e.functional = Functional::from_oracle(1, "bessel", [one, r](std::size_t n) { return circle_bessel_moments(one, r, n); });
    attach_zero_class(e, ZeroClassSpec({0.0, 0.0, 1.0}, -one, (r + 2.0) * one, mu0_of(e.functional)));
    e.expected.erase("class");
    e.expected["positive_definite"] = 0;
    return e;
}

GalleryEntry build_bessel_real(const Params& p) {
    const int r = bessel_r(p);
    GalleryEntry e;
    // the circle moments divided by 2 pi i (r+1)!: 1 / (r+2)_n
    e.functional = Functional::from_oracle(1, "bessel_real", [r](std::size_t n) {
        double v = 1.0;
        for (std::size_t k = 0; k < n; ++k) v /= (r + 2.0 + static_cast<double>(k));
        return CMatrix::Constant(1, 1, v);
    });
    attach_zero_class(e, ZeroClassSpec({0.0, 0.0, 1.0}, -identity(1), (r + 2.0) * identity(1), identity(1)));
    e.expected.erase("class");
    e.expected["positive_definite"] = 0;
    return e;
}

// ---- Examples 1-4 and the counterexample ------------------------------------------------

GalleryEntry build_example1(const Params&) {
    GalleryEntry e;
    auto leg = [](std::size_t k) -> cplx { return (k % 2) ? 0.0 : 2.0 / (static_cast<double>(k) + 1.0); };
    e.functional = poly_weight("example1", 2, {{1.0, 0.0, 2.0, 0.0, -3.0}, {0.0, 2.0, 0.0, -2.0}, {0.0, 2.0, 0.0, -2.0}, {1.0, 0.0, -1.0}}, leg);
    MatrixPolynomial Phi = matpoly(2, {{1.0, 0.0, -1.0}, {}, {}, {1.0, 0.0, -1.0}});
    MatrixPolynomial Psi = matpoly(2, {{0.0, -2.0}, {2.0}, {2.0, 0.0, -6.0}, {0.0, -8.0}});
    e.pearson = PearsonSpec(Phi, Psi, mu0_of(e.functional));
    e.pairs["M_2_2"] = {Phi, Psi};
    e.pairs["M_3_1"] = {matpoly(2, {{3.0, 0.0, -3.0}, {}, {0.0, -2.0, 0.0, 2.0}, {1.0, 0.0, -1.0}}),
                        matpoly(2, {{0.0, -10.0}, {2.0}, {4.0}, {0.0, -8.0}})};
    e.pairs["M_2_1"] = {matpoly(2, {{}, {}, {}, {1.0, 0.0, -1.0}}), matpoly(2, {{}, {2.0}, {}, {0.0, -8.0}})};
    e.pairs["M_3_2_second"] = {matpoly(2, {{}, {}, {}, {0.0, 1.0, 0.0, -1.0}}), matpoly(2, {{}, {0.0, 2.0}, {}, {1.0, 0.0, -9.0}})};
    e.expected = {{"rank_3_2", 2}, {"rank_2_2", 1}, {"rank_3_1", 1}, {"rank_2_1", 1},
                  {"rank_1_2", 0}, {"rank_3_0", 0}, {"rank_0_3", 0}, {"positive_definite", 1}};
    return e;
}

cplx nonzero_a(const Params& p) {
    const cplx a = p.get("a", 1.0);
    require(a != 0.0, "a must be nonzero");
    return a;
}

GalleryEntry build_example2(const Params& p) {
    const cplx a = nonzero_a(p), ab = std::conj(a);
    const double A = std::norm(a);
    GalleryEntry e;
    Kernel g = [](std::size_t k) -> cplx { return gaussian_moments(k); };
    e.functional = poly_weight("example2", 2, {{1.0, 0.0, A}, {0.0, a}, {0.0, ab}, {1.0}}, g);
    MatrixPolynomial Phi = matpoly(2, {{A + 2.0}, {}, {0.0, -ab * A}, {1.0}});
    MatrixPolynomial Psi = matpoly(2, {{0.0, -4.0}, {a}, {2.0 * ab}, {0.0, -(A + 2.0)}});
    e.pearson = PearsonSpec(Phi, Psi, mu0_of(e.functional));
    e.class_pair = PearsonSpec(MatrixPolynomial::scalar({1.0}, 2),
                               matpoly(2, {{0.0, A - 2.0}, {a}, {ab, 0.0, -ab * A}, {0.0, -(A + 2.0)}}), mu0_of(e.functional));
    e.phi0_factor = diag2(1.0, 2.0);
    e.u1_printed = poly_weight("example2_u1", 2, {{A + 2.0, 0.0, 2.0 * A}, {0.0, 2.0 * a}, {0.0, 2.0 * ab}, {2.0}}, g);
    e.ode = OdeFixture{matpoly(2, {{A + 2.0}, {0.0, -a * A}, {}, {2.0}}),
                       matpoly(2, {{0.0, -4.0}, {2.0 * a}, {2.0 * ab}, {0.0, -2.0 * (A + 2.0)}}),
                       diag2(4.0, 2.0 * (A + 2.0)), zeros(2)};
    e.expected = {{"class", 1}, {"positive_definite", 1}, {"cyclic", 1}};
    return e;
}

GalleryEntry build_counterexample(const Params&) {
    GalleryEntry e;
    Kernel g = [](std::size_t k) -> cplx { return gaussian_moments(k); };
    e.functional = poly_weight("counterexample", 2, {{1.0, 0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, {1.0}}, g);
    e.expected = {{"positive_definite", 1}, {"pearson_2_1_nondegenerate", 0}};
    return e;
}

double laguerre_r(const Params& p, double fallback) {
    const double r = p.real("r", fallback);
    require(r > -1.0, "r must be > -1");
    return r;
}

GalleryEntry build_example3(const Params& p) {
    const cplx a = nonzero_a(p), ab = std::conj(a);
    const double A = std::norm(a);
    const double r = laguerre_r(p, 0.0);
    GalleryEntry e;
    Kernel g = [r](std::size_t k) -> cplx { return gamma_moments(r, k); };
    Kernel g1 = [r](std::size_t k) -> cplx { return gamma_moments(r + 1.0, k); };
    e.functional = poly_weight("example3", 2, {{0.0, 1.0, A}, {0.0, a}, {0.0, ab}, {1.0}}, g);
    e.class_pair = PearsonSpec(MatrixPolynomial::scalar({0.0, 1.0}, 2),
                               matpoly(2, {{r + 2.0, A - 1.0}, {a}, {0.0, 0.0, -ab * A}, {r + 1.0, -(A + 1.0)}}),
                               mu0_of(e.functional));
    MatrixPolynomial Phi = matpoly(2, {{0.0, A + 1.0}, {}, {0.0, 0.0, -ab * A}, {0.0, 1.0}});
    MatrixPolynomial Psi = matpoly(2, {{(r + 2.0) * (A + 1.0), -1.0}, {a}, {0.0, -(r + 2.0) * ab * A}, {r + 1.0, -(A + 1.0)}});
    e.pearson = PearsonSpec(Phi, Psi, mu0_of(e.functional));
    e.phi0_factor = identity(2);
    e.u1_printed = poly_weight("example3_u1", 2, {{0.0, A + 1.0, A}, {0.0, a}, {0.0, ab}, {1.0}}, g1);
    e.ode = OdeFixture{matpoly(2, {{0.0, A + 1.0}, {0.0, 0.0, -a * A}, {}, {0.0, 1.0}}),
                       matpoly(2, {{(r + 2.0) * (A + 1.0), -1.0}, {0.0, -(r + 2.0) * a * A}, {ab}, {r + 1.0, -(A + 1.0)}}),
                       mat2(1.0, (r + 1.0) * a * A, 0.0, A + 1.0), mat2(0.0, a * A, 0.0, 0.0)};
    e.expected = {{"class", 1}, {"positive_definite", 1}, {"cyclic", 1}};
    return e;
}

GalleryEntry build_example4(const Params& p) {
    const cplx a = nonzero_a(p), ab = std::conj(a);
    const double A = std::norm(a);
    const double r = laguerre_r(p, 0.0);
    GalleryEntry e;
    Kernel g = [r](std::size_t k) -> cplx { return gamma_moments(r, k); };
    Kernel g1 = [r](std::size_t k) -> cplx { return gamma_moments(r + 1.0, k); };
    e.functional = poly_weight("example4", 2, {{0.0, 0.0, 1.0 + A}, {0.0, a}, {0.0, ab}, {1.0}}, g);
    e.class_pair = PearsonSpec(MatrixPolynomial::scalar({0.0, 0.0, 1.0}, 2),
                               matpoly(2, {{0.0, r + A + 4.0, -1.0}, {a}, {0.0, 0.0, -ab * (A + 1.0)}, {0.0, r - A + 2.0, -1.0}}),
                               mu0_of(e.functional));
    MatrixPolynomial Phi = matpoly(2, {{0.0, 1.0}, {-a}, {}, {0.0, r + A + 2.0}});
    MatrixPolynomial Psi = matpoly(2, {{r + A + 3.0, -1.0}, {a}, {0.0, -ab * (A + 1.0)}, {(r + 1.0) * (r + 2.0), -(r + A + 2.0)}});
    e.pearson = PearsonSpec(Phi, Psi, mu0_of(e.functional));
    e.phi0_factor = diag2(r + 1.0, 1.0);
    e.u1_printed = poly_weight("example4_u1", 2, {{0.0, 0.0, (r + 1.0) * (A + 1.0)}, {0.0, (r + 1.0) * a}, {0.0, (r + 1.0) * ab}, {r + 2.0}}, g1);
    e.ode = OdeFixture{matpoly(2, {{0.0, r + 1.0}, {}, {-ab}, {0.0, r + A + 2.0}}),
                       matpoly(2, {{(r + 1.0) * (r + A + 3.0), -(r + 1.0)}, {0.0, -(r + 1.0) * a * (A + 1.0)}, {ab},
                                   {(r + 1.0) * (r + 2.0), -(r + A + 2.0)}}),
                       mat2(r + 1.0, (r + 1.0) * a * (A + 1.0), 0.0, r + A + 2.0), zeros(2)};
    e.expected = {{"class", 1}, {"positive_definite", 1}, {"cyclic", 1}};
    return e;
}

// ---- example5: w R with R = [[c + int q/alpha, a], [b, 0]] ------------------------------

struct Ex5 {
    cplx a, b, c, c1, c2;
};

Ex5 ex5_params(const Params& p, cplx c1_default) {
    Ex5 x{p.get("a", 1.0), p.get("b", 1.0), p.get("c", 0.0), p.get("c1", c1_default), p.get("c2", 0.0)};
    require(x.a != 0.0 && x.b != 0.0, "example5 needs a, b nonzero");
    require(x.c1 != 0.0 || x.c2 != 0.0, "example5 needs c1, c2 not both zero");
    return x;
}

ZeroClassSpec ex5_spec(const Ex5& x, std::array<cplx, 3> alpha, cplx beta0, cplx beta1, cplx q0, cplx q1, const CMatrix& mu0) {
    return ZeroClassSpec(alpha, mat2(beta0, 0.0, q0 / x.a, beta0), mat2(beta1, 0.0, q1 / x.a, beta1), mu0);
}

void ex5_finish(GalleryEntry& e, const Ex5& x, SymbolicWeight sw) {
    e.symbolic = std::move(sw);
    const bool hermitian = x.b == std::conj(x.a) && x.c.imag() == 0.0 && x.c1.imag() == 0.0 && x.c2.imag() == 0.0;
    e.expected["hermitian"] = hermitian ? 1 : 0;
    e.expected["diagonalizable"] = 0;
    e.expected["positive_definite"] = 0;
}

GalleryEntry build_example5_hermite(const Params& p) {
    const Ex5 x = ex5_params(p, 1.0);
    GalleryEntry e;
    Kernel g = [](std::size_t k) -> cplx { return gaussian_moments(k); };
    e.functional = poly_weight("example5_hermite", 2, {{x.c, x.c1, x.c2}, {x.a}, {x.b}, {}}, g);
    // R_11' = c1 + 2 c2 x = q
    attach_zero_class(e, ex5_spec(x, {1.0, 0.0, 0.0}, 0.0, -2.0, x.c1, 2.0 * x.c2, mu0_of(e.functional)));
    ex5_finish(e, x, {{"1", "x", "x^2"}, {{x.c, x.c1, x.c2}, {x.a, 0.0, 0.0}, {x.b, 0.0, 0.0}, {0.0, 0.0, 0.0}}});
    return e;
}

GalleryEntry build_example5_laguerre(const Params& p) {
    const Ex5 x = ex5_params(p, 1.0);
    const double r = laguerre_r(p, 0.5);
    GalleryEntry e;
    e.functional = Functional::from_oracle(2, "example5_laguerre", [x, r](std::size_t n) {
        const double g0 = gamma_moments(r, n), g1 = gamma_moments(r, n + 1), gl = gamma_log_moments(r, n);
        return mat2(x.c * g0 + x.c1 * g1 + x.c2 * gl, x.a * g0, x.b * g0, 0.0);
    });
    // R_11 = c + c1 x + c2 log x, so q = x R_11' = c2 + c1 x
    attach_zero_class(e, ex5_spec(x, {0.0, 1.0, 0.0}, r + 1.0, -1.0, x.c2, x.c1, mu0_of(e.functional)));
    ex5_finish(e, x, {{"1", "x", "log x"}, {{x.c, x.c1, x.c2}, {x.a, 0.0, 0.0}, {x.b, 0.0, 0.0}, {0.0, 0.0, 0.0}}});
    return e;
}

GalleryEntry build_example5_jacobi(const Params& p) {
    const Ex5 x = ex5_params(p, 0.5);
    const double r = p.real("r", 0.5), s = p.real("s", 1.5);
    require(r > -1.0 && s > -1.0, "example5_jacobi needs r, s > -1");
    GalleryEntry e;
    e.functional = Functional::from_oracle(2, "example5_jacobi", [x, r, s](std::size_t n) {
        const cplx k0 = jacobi_integral(r, s, n);
        const cplx kp = jacobi_integral(r, s, n, LogKind::OnePlus);
        const cplx km = jacobi_integral(r, s, n, LogKind::OneMinus);
        return mat2(x.c * k0 + x.c1 * kp + x.c2 * km, x.a * k0, x.b * k0, 0.0);
    });
    // R_11 = c + c1 log(1+x) + c2 log(1-x), so q = (1-x^2) R_11' = (c1 - c2) - (c1 + c2) x
    attach_zero_class(e, ex5_spec(x, {1.0, 0.0, -1.0}, r - s, -(r + s + 2.0), x.c1 - x.c2, -(x.c1 + x.c2),
                                  mu0_of(e.functional)));
    ex5_finish(e, x, {{"1", "log(1+x)", "log(1-x)"}, {{x.c, x.c1, x.c2}, {x.a, 0.0, 0.0}, {x.b, 0.0, 0.0}, {0.0, 0.0, 0.0}}});
    return e;
}

// ---- m-dimensional families ---------------------------------------------------------------

CMatrix default_A() { return mat2(0.5, 1.0, 0.0, 1.5); }

GalleryEntry build_hermite_matrix(const Params& p) {
    const CMatrix A = p.matrix("A", mat2(0.5, 1.0, 0.0, -0.5));
    const CMatrix B = p.matrix("B", identity(2));
    JointEigen je = joint_eigen(A, B);
    for (cplx l : je.lb) require(l.real() > 0.0, "spec(B) must lie in Re > 0");
    GalleryEntry e;
    e.functional = joint_weight("hermite_matrix", je, [](cplx a, cplx b, std::size_t n) { return shifted_gauss(a, b, n); });
    attach_zero_class(e, ZeroClassSpec({1.0, 0.0, 0.0}, A, -2.0 * B, mu0_of(e.functional)));
    return e;
}

GalleryEntry build_laguerre_matrix(const Params& p) {
    const CMatrix A = p.matrix("A", default_A());
    const CMatrix B = p.matrix("B", identity(2));
    JointEigen je = joint_eigen(A, B);
    for (cplx l : je.la) require(l.real() > -1.0, "spec(A) must lie in Re > -1");
    for (cplx l : je.lb) require(l.real() > 0.0, "spec(B) must lie in Re > 0");
    GalleryEntry e;
    e.functional = joint_weight("laguerre_matrix", je, [](cplx a, cplx b, std::size_t n) {
        const cplx z = a + static_cast<double>(n) + 1.0;
        return special::gamma(z) * std::exp(-z * std::log(b));
    });
    const Index m = A.rows();
    attach_zero_class(e, ZeroClassSpec({0.0, 1.0, 0.0}, A + identity(m), -B, mu0_of(e.functional)));
    return e;
}

GalleryEntry build_jacobi_matrix(const Params& p) {
    const CMatrix A = p.matrix("A", default_A());
    const CMatrix B = p.matrix("B", 0.5 * identity(2) + 0.5 * default_A());
    JointEigen je = joint_eigen(A, B);
    for (std::size_t i = 0; i < je.la.size(); ++i)
        require(je.la[i].real() > -1.0 && je.lb[i].real() > -1.0, "spec(A), spec(B) must lie in Re > -1");
    GalleryEntry e;
    e.functional = joint_weight("jacobi_matrix", je, [](cplx a, cplx b, std::size_t n) { return jacobi_integral(a, b, n); });
    const Index m = A.rows();
    attach_zero_class(e, ZeroClassSpec({1.0, 0.0, -1.0}, A - B, -(A + B + 2.0 * identity(m)), mu0_of(e.functional)));
    return e;
}

GalleryEntry build_bessel_matrix(const Params& p) {
    const int r = bessel_r(p);
    const CMatrix B = p.matrix("B", mat2(1.0, 0.5, 0.0, 2.0));
    require(B.rows() == B.cols() && std::abs(B.determinant()) > 1e-12, "B must be square and nonsingular");
    GalleryEntry e;
    e.functional = Functional::from_oracle(B.rows(), "bessel_matrix", [B, r](std::size_t n) { return circle_bessel_moments(B, r, n); });
    attach_zero_class(e, ZeroClassSpec({0.0, 0.0, 1.0}, -B, (r + 2.0) * identity(B.rows()), mu0_of(e.functional)));
    e.expected.erase("class");
    e.expected["positive_definite"] = 0;
    return e;
}

GalleryEntry build_bessel_series(const Params& p) {
    const CMatrix A = p.matrix("A", mat2(2.0, 1.0, 0.0, 3.0));
    const CMatrix B = p.matrix("B", mat2(1.0, 1.0, 0.0, 2.0));
    require(A.rows() == A.cols() && B.rows() == A.rows() && B.cols() == A.cols(), "A and B must be square, same size");
    require((A * B - B * A).norm() <= 1e-12 * std::max(1.0, A.norm() * B.norm()), "A and B must commute");
    Eigen::ComplexEigenSolver<CMatrix> es(A);
    for (Index i = 0; i < A.rows(); ++i) {
        const cplx l = es.eigenvalues()(i);
        require(!(std::abs(l.imag()) < 1e-12 && l.real() <= 0.0 && std::abs(l.real() - std::round(l.real())) < 1e-12),
                "spec(A) must avoid 0, -1, -2, ...");
    }
    GalleryEntry e;
    e.functional = Functional::from_oracle(A.rows(), "bessel_series", [A, B](std::size_t n) { return circle_series_moments(A, B, n); });
    attach_zero_class(e, ZeroClassSpec({0.0, 0.0, 1.0}, -B, A, mu0_of(e.functional)));
    e.expected.erase("class");
    e.expected["positive_definite"] = 0;
    return e;
}

// Diagonal sum of shifted Gaussians e^{a_i x - b_i x^2}, conjugated by a fixed unitary U.
GalleryEntry build_scrambled_hermite(const Params& p) {
    const std::vector<double> as = {p.real("a1", 0.0), p.real("a2", 0.5), p.real("a3", -1.0)};
    const std::vector<double> bs = {p.real("b1", 1.0), p.real("b2", 2.0), p.real("b3", 0.5)};
    for (double b : bs) require(b > 0.0, "scrambled_hermite needs b_i > 0");
    CMatrix G(3, 3);
    G << cplx(1, 2), 0.5, -1.0, cplx(0, 0.3), 2.0, cplx(1, -1), 1.0, cplx(-0.7, 0.2), 1.5;
    Eigen::HouseholderQR<CMatrix> qr(G);
    const CMatrix U = qr.householderQ();
    GalleryEntry e;
    e.functional = Functional::from_oracle(3, "scrambled_hermite", [U, as, bs](std::size_t n) {
        CMatrix D = CMatrix::Zero(3, 3);
        for (Index i = 0; i < 3; ++i) D(i, i) = shifted_gauss(as[static_cast<std::size_t>(i)], bs[static_cast<std::size_t>(i)], n);
        return CMatrix(U * D * U.adjoint());
    });
    CMatrix P0 = CMatrix::Zero(3, 3), P1 = CMatrix::Zero(3, 3);
    for (Index i = 0; i < 3; ++i) {
        P0(i, i) = as[static_cast<std::size_t>(i)];
        P1(i, i) = -2.0 * bs[static_cast<std::size_t>(i)];
    }
    attach_zero_class(e, ZeroClassSpec({1.0, 0.0, 0.0}, U * P0 * U.adjoint(), U * P1 * U.adjoint(), mu0_of(e.functional)));
    e.params.matrices["U"] = U;
    e.expected["positive_definite"] = 1;
    e.expected["diagonalizable"] = 1;
    return e;
}

struct Registered {
    const char* name;
    const char* description;
    GalleryEntry (*build)(const Params&);
};

const std::vector<Registered>& registry() {
    static const std::vector<Registered> r = {
        {"hermite", "scalar e^{-x^2}/sqrt(pi)", build_hermite},
        {"laguerre", "scalar x^r e^{-x} on (0, inf); r", build_laguerre},
        {"jacobi", "scalar (1+x)^r (1-x)^s on (-1, 1); r, s", build_jacobi},
        {"bessel", "scalar x^r e^{1/x} on the unit circle; integer r >= -1", build_bessel},
        {"bessel_real", "scalar Bessel moments 1/(r+2)_n (real normalization); r", build_bessel_real},
        {"example1", "(1-x^2)[[1+3x^2, 2x],[2x, 1]] on (-1, 1)", build_example1},
        {"example2", "e^{-x^2}[[1+|a|^2x^2, ax],[conj(a)x, 1]]; a", build_example2},
        {"counterexample", "e^{-x^2}[[1+x^4, x^2],[x^2, 1]]", build_counterexample},
        {"example3", "x^r e^{-x}[[x+|a|^2x^2, ax],[conj(a)x, 1]]; a, r", build_example3},
        {"example4", "x^r e^{-x}[[x^2+|a|^2x^2, ax],[conj(a)x, 1]]; a, r", build_example4},
        {"example5_hermite", "e^{-x^2}[[c+c1x+c2x^2, a],[b, 0]]; a, b, c, c1, c2", build_example5_hermite},
        {"example5_laguerre", "x^r e^{-x}[[c+c1x+c2 log x, a],[b, 0]]; a, b, c, c1, c2, r", build_example5_laguerre},
        {"example5_jacobi", "(1+x)^r(1-x)^s[[c+c1 log(1+x)+c2 log(1-x), a],[b, 0]]; a, b, c, c1, c2, r, s",
         build_example5_jacobi},
        {"hermite_matrix", "e^{Ax} e^{-Bx^2} with commuting A, B", build_hermite_matrix},
        {"laguerre_matrix", "x^A e^{-Bx} with commuting A, B", build_laguerre_matrix},
        {"jacobi_matrix", "(1+x)^A (1-x)^B with commuting A, B", build_jacobi_matrix},
        {"bessel_matrix", "x^r e^{B/x} on the unit circle; B, r", build_bessel_matrix},
        {"bessel_series", "sum_k (A)_k^{-1} B^k x^{-(k+1)} on the unit circle; A, B commuting", build_bessel_series},
        {"scrambled_hermite", "U diag(e^{a_i x - b_i x^2}) U^* for a fixed unitary U", build_scrambled_hermite},
    };
    return r;
}

}  // namespace

CMatrix OdeFixture::Lambda(std::size_t n) const {
    const double nd = static_cast<double>(n);
    return nd * (L0 + nd * L1);
}

double gaussian_moments(std::size_t k) {
    if (k % 2) return 0.0;
    return special::gamma((static_cast<double>(k) + 1.0) / 2.0);
}

double gamma_moments(double r, std::size_t k) {
    require(r > -1.0, "gamma_moments needs r > -1");
    return special::gamma(r + static_cast<double>(k) + 1.0);
}

double gamma_log_moments(double r, std::size_t k) {
    require(r > -1.0, "gamma_log_moments needs r > -1");
    const double z = r + static_cast<double>(k) + 1.0;
    return special::gamma(z) * special::digamma(z);
}

CMatrix circle_bessel_moments(const CMatrix& B, int r, std::size_t n) {
    require(r >= -1, "circle Bessel weight needs r >= -1");
    const long e = static_cast<long>(n) + r + 1;
    CMatrix P = identity(B.rows());
    double f = 1.0;
    for (long k = 1; k <= e; ++k) {
        P = P * B;
        f *= static_cast<double>(k);
    }
    return kTwoPiI * P / f;
}

CMatrix circle_series_moments(const CMatrix& A, const CMatrix& B, std::size_t n) {
    const Index m = A.rows();
    CMatrix poch = identity(m), Bn = identity(m);
    for (std::size_t k = 0; k < n; ++k) {
        poch = poch * (A + static_cast<double>(k) * identity(m));
        Bn = Bn * B;
    }
    Eigen::FullPivLU<CMatrix> lu(poch);
    require(lu.isInvertible(), "(A)_n is singular");
    return kTwoPiI * lu.solve(Bn);
}

cplx Params::get(const std::string& key, cplx fallback) const {
    auto it = scalars.find(key);
    return it == scalars.end() ? fallback : it->second;
}

double Params::real(const std::string& key, double fallback) const {
    cplx v = get(key, fallback);
    require(v.imag() == 0.0, "parameter " + key + " must be real");
    return v.real();
}

CMatrix Params::matrix(const std::string& key, const CMatrix& fallback) const {
    auto it = matrices.find(key);
    return it == matrices.end() ? fallback : it->second;
}

std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& r : registry()) out.emplace_back(r.name);
    return out;
}

std::string describe(const std::string& name) {
    for (const auto& r : registry())
        if (name == r.name) return r.description;
    throw UnknownExample("unknown gallery example: " + name);
}

GalleryEntry build(const std::string& name, const Params& params) {
    for (const auto& r : registry()) {
        if (name != r.name) continue;
        GalleryEntry e = r.build(params);
        e.name = r.name;
        e.description = r.description;
        for (const auto& [k, v] : params.scalars) e.params.scalars[k] = v;
        for (const auto& [k, v] : params.matrices) e.params.matrices[k] = v;
        return e;
    }
    throw UnknownExample("unknown gallery example: " + name);
}

}  // namespace mopkit::gallery
