#include <doctest.h>

#include "mopkit/errors.hpp"
#include "mopkit/gallery.hpp"
#include "mopkit/pearson.hpp"
#include "oracle.hpp"

using namespace mopkit;

namespace {

CMatrix c1(cplx v) { return CMatrix::Constant(1, 1, v); }

CMatrix m2(cplx a, cplx b, cplx c, cplx d) {
    CMatrix M(2, 2);
    M << a, b, c, d;
    return M;
}

bool det_vanishes(const MatrixPolynomial& Phi) {
    const DetAdj da = poly_det_adj(Phi);
    return da.det.norm() <= 1e-9 * std::max(1.0, Phi.norm() * Phi.norm());
}

}  // namespace

TEST_SUITE("pearson") {

TEST_CASE("default certificate horizon is at least 40") {
    CHECK(default_certificate_horizon(2, 3, 2) >= 40u);
    CHECK(default_certificate_horizon(4, 3, 2) == 2u * 4u * 8u);
}

TEST_CASE("example1 module ranks") {
    const auto g = gallery::build("example1");
    struct Row {
        std::size_t p, q, rank;
    };
    for (Row r : {Row{3, 2, 2}, Row{2, 2, 1}, Row{3, 1, 1}, Row{2, 1, 1}, Row{1, 2, 0}, Row{3, 0, 0}, Row{0, 3, 0}}) {
        CAPTURE(r.p);
        CAPTURE(r.q);
        const ModuleBasis b = module_basis(g.functional, r.p, r.q);
        CHECK(b.rank == r.rank);
        CHECK(b.horizon >= 40u);
        if (b.rank > 0) {
            CHECK(b.gap >= 1e6);
            CHECK(b.certificate_residual < 1e-8);
        }
    }
    const ModuleBasis b21 = module_basis(g.functional, 2, 1);
    REQUIRE(b21.generators.size() == 1);
    CHECK(det_vanishes(b21.generators[0].Phi));
    // the generator is a right multiple of (1 - x^2) diag(0, 1): its first column vanishes
    for (const auto& c : b21.generators[0].Phi.coeffs()) CHECK(c.col(0).norm() < 1e-9 * b21.generators[0].Phi.norm());

    // the printed pairs satisfy the Pearson equation on the moments
    for (const auto& [name, pair] : g.pairs) {
        CAPTURE(name);
        CHECK(pearson_certificate(g.functional, pair.Phi, pair.Psi, 40) < 1e-12);
    }
}

TEST_CASE("cyclicity") {
    const auto e2 = gallery::build("example2");
    const CyclicityReport c2 = cyclicity_check(e2.functional);
    CHECK(c2.verdict == Cyclicity::Cyclic);
    REQUIRE(c2.generator.has_value());
    CHECK_FALSE(det_vanishes(c2.generator->Phi));

    const CyclicityReport c1r = cyclicity_check(gallery::build("example1").functional);
    CHECK(c1r.verdict == Cyclicity::CyclicDegenerate);

    // Hermite (+) Hermite: generator is a multiple of I
    std::vector<CMatrix> mu;
    for (std::size_t n = 0; n <= 60; ++n) mu.push_back(oracle::gauss(n) * identity(2));
    const CyclicityReport hh = cyclicity_check(Functional::from_moments(mu));
    CHECK(hh.verdict == Cyclicity::Cyclic);
    REQUIRE(hh.generator.has_value());
    const MatrixPolynomial& P = hh.generator->Phi;
    const CMatrix lead = P.coeff(0);
    CHECK(offdiag_norm(lead) < 1e-9 * lead.norm());
    CHECK(std::abs(lead(0, 0) - lead(1, 1)) < 1e-9 * lead.norm());
}

TEST_CASE("class of Examples 2, 3 and scalar Hermite") {
    const auto e2 = gallery::build("example2");
    const ClassReport r2 = scalar_ideal(e2.functional, e2.pearson, 4);
    CHECK(r2.s == 1);
    CHECK(r2.alpha.degree() == 0u);
    CHECK(r2.Psi.degree() == 2u);

    const auto e3 = gallery::build("example3");
    const ClassReport r3 = scalar_ideal(e3.functional, e3.pearson, 4);
    CHECK(r3.s == 1);
    REQUIRE(r3.alpha.degree() == 1u);
    CHECK(std::abs(r3.alpha.coeff(0)(0, 0)) < 1e-9);

    const Functional h = Functional::from_pearson(
        PearsonSpec(MatrixPolynomial::scalar({1.0}), MatrixPolynomial::scalar({0.0, -2.0}), c1(1.0)));
    const ClassReport rh = scalar_ideal(h, std::nullopt, 2);
    CHECK(rh.s == 0);
    CHECK(rh.alpha.degree() == 0u);
    CHECK(std::abs(rh.Psi.coeff(1)(0, 0) + 2.0) < 1e-9);
}

TEST_CASE("no scalar generator below the bound") {
    // the counterexample is not of class <= 0 with alpha of degree 0
    const auto g = gallery::build("counterexample");
    CHECK_THROWS_AS(scalar_ideal(g.functional, std::nullopt, 0), NoGeneratorFound);
}

TEST_CASE("tilde Pearson pair") {
    const PearsonSpec h(MatrixPolynomial::scalar({1.0}), MatrixPolynomial::scalar({0.0, -2.0}), c1(1.0));
    const TildeResult t = tilde_pearson(h, Functional::from_pearson(h));
    CHECK(t.spec.Phi.degree() == 0u);
    CHECK(std::abs(t.spec.Psi.coeff(1)(0, 0) / t.spec.Phi.coeff(0)(0, 0) + 2.0) < 1e-12);
    CHECK(t.certificate < 1e-12);

    const auto e3 = gallery::build("example3");
    const TildeResult t3 = tilde_pearson(*e3.pearson, e3.functional, {}, 10);
    CHECK(t3.certificate < 1e-8);
    CHECK(t3.identity_residual < 1e-12);

    // psi_1 + phi_2 singular
    const PearsonSpec bad(MatrixPolynomial::scalar({1.0, 0.0, 1.0}), MatrixPolynomial::scalar({0.0, -1.0}), c1(1.0));
    CHECK_THROWS_AS(tilde_pearson(bad, Functional::from_moments({c1(1), c1(0), c1(1)})), TildeBlocked);
}

TEST_CASE("derivative chains") {
    const PearsonSpec h(MatrixPolynomial::scalar({1.0}), MatrixPolynomial::scalar({0.0, -2.0}), c1(1.0));
    const auto chain = derivative_chain(h, Functional::from_pearson(h), 3);
    REQUIRE(chain.size() >= 3);
    for (const auto& link : chain) {
        CHECK(link.spec.Phi.degree() == 0u);
        CHECK(link.orthogonality_residual < 1e-10);
    }

    const auto e2 = gallery::build("example2");
    const auto c2 = derivative_chain(*e2.pearson, e2.functional, 2);
    for (const auto& link : c2) CHECK(link.orthogonality_residual < 1e-8);

    const PearsonSpec bad(MatrixPolynomial::scalar({1.0, 0.0, 1.0}), MatrixPolynomial::scalar({0.0, -1.0}), c1(1.0));
    try {
        (void)derivative_chain(bad, Functional::from_moments(std::vector<CMatrix>(40, c1(1))), 2);
        FAIL("expected ChainBroken");
    } catch (const ChainBroken& e) {
        CHECK(e.index() == 0u);
    }
}

}  // TEST_SUITE
