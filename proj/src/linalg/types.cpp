#include "mopkit/types.hpp"

#include <algorithm>

#include "mopkit/errors.hpp"

namespace mopkit {

void Tolerance::validate() const {
    if (!(rel > 0.0) || !(abs > 0.0) || !(cond_max > 1.0))
        throw InvalidParameter("tolerance requires rel > 0, abs > 0, cond_max > 1");
}

double rel_diff(const CMatrix& A, const CMatrix& B, double floor) {
    return (A - B).norm() / std::max(B.norm(), floor);
}

double offdiag_norm(const CMatrix& A) {
    double s = 0.0;
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            if (i != j) s += std::norm(A(i, j));
    return std::sqrt(s);
}

}  // namespace mopkit
