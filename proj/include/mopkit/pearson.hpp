#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mopkit/segment.hpp"

namespace mopkit {

struct PearsonPair {
    MatrixPolynomial Phi;
    MatrixPolynomial Psi;
};

// Right C^{m x m}-module {Phi in P_p : D(u Phi) = u Psi for some Psi in P_q}, certified on
// the equations n = 0..horizon.
struct ModuleBasis {
    std::size_t p = 0, q = 0;
    std::vector<PearsonPair> generators;
    std::size_t rank = 0;     // number of generators = ceil(nullity / m)
    std::size_t nullity = 0;  // dimension of the scalar column solution space
    std::size_t horizon = 0;  // N_cert
    std::vector<double> singular_values;  // of the equilibrated system, descending
    // smallest kept singular value over the largest discarded one (or over eps * sigma_max
    // when nothing is discarded)
    double gap = 0.0;
    double certificate_residual = 0.0;  // re-verified from the generators
};

std::size_t default_certificate_horizon(Index m, std::size_t p, std::size_t q);

ModuleBasis module_basis(const Functional& u, std::size_t p, std::size_t q,
                         std::optional<std::size_t> horizon = std::nullopt, const Tolerance& tol = {});

enum class Cyclicity {
    Cyclic,            // rank 1, generator with det Phi not identically 0
    CyclicDegenerate,  // rank 1 but every generator has det Phi = 0
    Trivial,           // M_{2,1}(u) = {0}
    NotCyclic,         // rank >= 2
    Inconclusive       // some Delta_0..Delta_2 singular
};
const char* to_string(Cyclicity c);

struct CyclicityReport {
    Cyclicity verdict = Cyclicity::Inconclusive;
    std::optional<PearsonPair> generator;
    ModuleBasis basis;
    std::string detail;
};

CyclicityReport cyclicity_check(const Functional& u, const Tolerance& tol = {},
                                std::optional<std::size_t> horizon = std::nullopt);

// Minimal scalar alpha with D(u alpha I) = u Psi, alpha monic.
struct ClassReport {
    MatrixPolynomial alpha{1};  // dim 1
    MatrixPolynomial Psi{1};
    int s = 0;
    std::size_t certified_to = 0;
    double residual = 0.0;
    std::optional<MatrixPolynomial> seed_alpha;  // det Phi when a Pearson pair was supplied
};

ClassReport scalar_ideal(const Functional& u, const std::optional<PearsonSpec>& known, std::size_t d_max,
                         std::optional<std::size_t> horizon = std::nullopt, const Tolerance& tol = {});

// Pearson pair of u~ = u Phi psi_1^{-1}, with phi~_2 = phi_2, psi~_1 = I + 2 phi_2 after
// normalizing psi_1 = I.
struct TildeResult {
    PearsonSpec normalized;  // (Phi psi_1^{-1}, Psi psi_1^{-1}) for u
    PearsonSpec spec;        // (Phi~, Psi~) for u~, mu0 = mu~_0
    Functional u_tilde;
    double identity_residual = 0.0;  // |Psi Phi~ + Phi Phi~' - Phi Psi~| relative
    double certificate = 0.0;        // Pearson residual of u~ on the horizon
    std::size_t horizon = 0;
};

TildeResult tilde_pearson(const PearsonSpec& spec, const Functional& u, const Tolerance& tol = {},
                          std::size_t horizon = 12);

struct ChainLink {
    std::size_t level = 0;
    Functional u;
    PearsonSpec spec;
    // orthogonality of the level-th monic derivatives of u's MOP against this link's functional
    double orthogonality_residual = 0.0;
};

std::vector<ChainLink> derivative_chain(const PearsonSpec& spec, const Functional& u, std::size_t depth,
                                        std::size_t N = 5, const Tolerance& tol = {});

}  // namespace mopkit
