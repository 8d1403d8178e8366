#pragma once

#include <optional>
#include <vector>

#include "mopkit/types.hpp"

namespace mopkit {

using BlockRow = std::vector<CMatrix>;
// blocks[i][j] is block (i, j); all blocks m x m.
using BlockMatrix = std::vector<std::vector<CMatrix>>;

// Result of a complete-pivoting elimination on a square system.
struct Elimination {
    double cond_estimate = 0.0;  // max |pivot| / min |pivot|
    bool singular = false;
};

// Solve A X = B. The condition estimate is the pivot ratio of complete-pivoting
// elimination; throws SingularSystem if it exceeds tol.cond_max or a pivot vanishes.
CMatrix solve_left(const CMatrix& A, const CMatrix& B, const Tolerance& tol);
// Solve X A = B (right division).
CMatrix solve_right(const CMatrix& A, const CMatrix& B, const Tolerance& tol);
CMatrix inverse(const CMatrix& A, const Tolerance& tol);
Elimination analyze(const CMatrix& A, const Tolerance& tol);
bool is_nonsingular(const CMatrix& A, const Tolerance& tol);

// X * H = rhs with H a p x p block matrix and X, rhs block rows of length p.
// Each block row/column of H is scaled by one scalar before elimination.
BlockRow solve_block_row(const BlockMatrix& H, const BlockRow& rhs, const Tolerance& tol);

CMatrix flatten(const BlockMatrix& H);
// Condition test of a block matrix after the same block-level scaling used by solve_block_row.
Elimination analyze_blocks(const BlockMatrix& H, const Tolerance& tol);

enum class Definiteness { PositiveDefinite, HermitianIndefinite, NonHermitian };
const char* to_string(Definiteness d);

bool is_hermitian(const CMatrix& A, const Tolerance& tol);
Definiteness psd_check(const CMatrix& A, const Tolerance& tol);

// Unitary T with T A T* diagonal for every A, or nullopt if some pair fails to commute.
std::optional<CMatrix> simultaneous_unitary_diagonalizer(const std::vector<CMatrix>& As,
                                                         const Tolerance& tol);

}  // namespace mopkit
