#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "props.hpp"

namespace {

constexpr std::size_t kCases = 250;
constexpr double kRel = 1e-7;

void report(const char* name, const props::Result& r) {
    std::printf("%-28s cases=%zu skipped=%zu worst=%.3g (%s)\n", name, r.cases, r.skipped, r.worst, r.where.c_str());
}

void expect(const char* name, const props::Result& r, double bound = kRel) {
    report(name, r);
    CHECK(r.cases >= 200);
    CHECK(r.worst <= bound);
}

}  // namespace

TEST_SUITE("prop.functional") {
TEST_CASE("product rule D(u Phi) = (Du) Phi + u Phi'") { expect("product rule", props::product_rule(101, kCases)); }
TEST_CASE("(uQ)R = u(QR) and R(Qu) = (RQ)u") { expect("associativity", props::product_associativity(102, kCases)); }
TEST_CASE("adjoint involution") { expect("adjoint", props::adjoint_involution(103, kCases)); }
TEST_CASE("affine changes compose") { expect("affine composition", props::affine_composition(104, kCases)); }
TEST_CASE("D(u alpha) moments") { expect("D(u alpha)", props::derivative_of_scalar_product(105, kCases)); }
}

TEST_SUITE("prop.pearson") {
TEST_CASE("derivative bracket identity") { expect("bracket identity", props::bracket_identity(201, kCases)); }
TEST_CASE("module bases: rank, monotonicity, certificate") { expect("module bases", props::module_properties(202, kCases)); }
TEST_CASE("class alpha divides det Phi") { expect("alpha | det Phi", props::ideal_divides_det(203, kCases)); }
}

TEST_SUITE("prop.zeroclass") {
TEST_CASE("structure relation and Sigma") { expect("structure relation", props::structure_relation_property(301, kCases)); }
TEST_CASE("closed forms and ode_solve vs Hankel") { expect("closed forms", props::closed_form_property(302, kCases)); }
TEST_CASE("hermiticity obstruction identity") { expect("obstruction identity", props::obstruction_identity(303, kCases)); }
TEST_CASE("scrambled diagonal functionals are recovered") { expect("diagonalization", props::diagonalization_recovery(304, kCases)); }
}

TEST_SUITE("prop.mop") {
TEST_CASE("Favard roundtrip") { expect("favard", props::favard(401, kCases)); }
TEST_CASE("orthogonality and positivity on positive definite functionals") { expect("segments", props::segment_orthogonality(402, kCases)); }
}

TEST_SUITE("prop.linalg") {
TEST_CASE("block solve residual within 10 tol.rel") { expect("block solve (/10 rel)", props::block_solve(501, kCases), 1.0); }
TEST_CASE("P adj P = det P I") { expect("det/adj", props::det_adj(502, kCases), 1e-12); }
TEST_CASE("poly_mul associative and distributive") { expect("polynomial ring", props::poly_ring(503, kCases), 1e-12); }
TEST_CASE("simultaneous diagonalizer") { expect("diagonalizer", props::diagonalizer(504, kCases), 1e-9); }
}
