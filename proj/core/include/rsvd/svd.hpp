#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rsvd/matrix.hpp"

namespace rsvd {

struct SvdFactors {
    Matrix u;                   // m x r, orthonormal columns
    std::vector<double> sigma;  // r nonincreasing nonnegative values
    Matrix v;                   // n x r, orthonormal columns
};

struct SvdConvergenceError : std::runtime_error {
    explicit SvdConvergenceError(int sweeps)
        : std::runtime_error("exact_svd: one-sided Jacobi did not converge within " +
                             std::to_string(sweeps) + " sweeps"),
          sweeps_used(sweeps) {}
    int sweeps_used;
};

/// Full SVD via one-sided Jacobi, r = min(m,n). Wide inputs are transposed
/// internally and the factors swapped back. This is the ground-truth oracle
/// for everything else in the library.
SvdFactors exact_svd(const Matrix& a);

/// Leading k triplets of exact_svd(a). When sigma_k = sigma_{k+1} the
/// truncation is not unique; this returns the oracle's (stable-sorted)
/// ordering rather than inventing a tie-break.
SvdFactors truncated_svd(const Matrix& a, int k);

/// Leading k triplets of an existing factorization.
SvdFactors truncate(const SvdFactors& f, int k);

/// U diag(sigma) V^T.
Matrix reconstruct(const SvdFactors& f);

struct MatrixNorms {
    double one = 0.0;
    double two = 0.0;  // sigma_1 from the exact oracle
    double fro = 0.0;
    double max = 0.0;
};

MatrixNorms norms(const Matrix& a);
double two_norm(const Matrix& a);

/// max |Q^T Q - I| entry; orthonormality defect used all over the tests.
double orthonormality_defect(const Matrix& q);

}  // namespace rsvd
