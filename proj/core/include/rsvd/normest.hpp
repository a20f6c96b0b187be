#pragma once

#include <functional>
#include <vector>

#include "rsvd/matrix.hpp"
#include "rsvd/rng.hpp"

namespace rsvd {

/// Matrix-free operator: everything here touches A only through products
/// A x and A^T y, so factorization-backed inverses plug straight in.
struct LinearOperator {
    int rows = 0;
    int cols = 0;
    std::function<std::vector<double>(const std::vector<double>&)> apply;
    std::function<std::vector<double>(const std::vector<double>&)> apply_transpose;
};

/// Wraps a dense matrix. The operator keeps a reference; the matrix must
/// outlive it.
LinearOperator matrix_operator(const Matrix& a);

/// Solve-based operator for the inverse of a nonsingular upper-triangular R:
/// apply performs R x = b, apply_transpose performs R^T y = c.
LinearOperator upper_triangular_inverse_operator(const Matrix& r);

/// Largest |<Ax, y> - <x, A^T y>| / (||x|| ||y||) over random probes; near
/// zero for a consistent adjoint pair.
double adjoint_mismatch(const LinearOperator& op, RngSeed seed, int probes = 8);

enum class StartVectorTag { ones, unit_ej, randomized, custom };

struct NormEstimate {
    double value = 0.0;  // an achieved ||Ax||_1 with ||x||_1 = 1: a lower bound
    int iterations = 0;
    long matvec_count = 0;
    StartVectorTag start_vector_tag = StartVectorTag::custom;
};

/// Gradient-ascent 1-norm estimator: y = Ax, z = A^T sign(y); stop once
/// ||z||_inf <= z^T x, else restart from the unit vector at argmax |z|
/// (lowest index on ties, sign(0) = +1). The returned value never decreases
/// across iterations.
NormEstimate hager_one_norm(const LinearOperator& op, std::vector<double> x0,
                            int max_iter = 5);

/// 1-norm estimation seeded by a rank-1 randomized sketch (q = 0, ell Gaussian
/// samples): the approximate leading right singular vector becomes the start
/// vector, then one or two estimator sweeps finish the job.
NormEstimate randomized_hager(const LinearOperator& op, int ell, RngSeed seed,
                              int hager_iters = 2);
NormEstimate randomized_hager(const Matrix& a, int ell, RngSeed seed,
                              int hager_iters = 2);

/// Power-method 2-norm estimate on an operator; matvec_count = 2q + 2.
struct OperatorPowerEstimate {
    double norm_estimate = 0.0;
    long matvec_count = 0;
};
OperatorPowerEstimate operator_power_method(const LinearOperator& op, int q, RngSeed seed);

struct ConditionEstimate {
    double kappa1_est = 0.0;
    double kappa2_est = 0.0;
    long matvec_count = 0;
};

/// kappa(A) = ||A|| ||A^-1|| with both norms estimated separately; inv_op must
/// implement solves with A.
ConditionEstimate condition_estimate(const LinearOperator& op, const LinearOperator& inv_op,
                                     int ell, RngSeed seed, int hager_iters = 2,
                                     int power_q = 4);

}  // namespace rsvd
