#pragma once

#include "rsvd/matrix.hpp"

namespace rsvd {

struct QrFactors {
    Matrix q;  // m x n, orthonormal columns
    Matrix r;  // n x n, upper triangular, nonnegative diagonal
};

/// Householder QR of a tall matrix (rows >= cols). The diagonal of R is made
/// nonnegative by flipping signs, so the factors are unique and reproducible.
QrFactors qr_factor(const Matrix& y);

/// Smallest diagonal magnitude of R; cheap rank indicator for sketch bases.
double min_abs_r_diag(const QrFactors& f);

}  // namespace rsvd
