#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace mopkit {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;
    double cond_max = 1e10;

    // Throws InvalidParameter unless rel > 0, abs > 0, cond_max > 1.
    void validate() const;
};

inline CMatrix identity(Index m) { return CMatrix::Identity(m, m); }
inline CMatrix zeros(Index m) { return CMatrix::Zero(m, m); }

// Frobenius norm of A - B divided by max(||B||, floor).
double rel_diff(const CMatrix& A, const CMatrix& B, double floor = 1e-300);

double offdiag_norm(const CMatrix& A);

}  // namespace mopkit
