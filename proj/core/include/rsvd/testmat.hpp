#pragma once

#include <vector>

#include "rsvd/matrix.hpp"
#include "rsvd/rng.hpp"

namespace rsvd {

/// Synthetic spectrum description. exponential: sigma_j = rate^(j-1);
/// power_law: sigma_j = j^(-exponent); custom: caller-supplied values.
struct DecaySpec {
    enum class Model { exponential, power_law, custom };
    Model model = Model::exponential;
    double rate = 0.5;
    double exponent = 2.0;
    std::vector<double> custom_sigma;
    int n = 0;
};

std::vector<double> decay_sigma(const DecaySpec& spec);

struct DecayMatrix {
    Matrix matrix;
    std::vector<double> true_sigma;  // ground truth by construction
};

/// U diag(sigma) V^T with Haar-random orthogonal factors (QR of a Gaussian
/// draw, R-diagonal sign fixed).
DecayMatrix decay_matrix(const DecaySpec& spec, RngSeed seed);

Matrix haar_orthogonal(int n, RngSeed seed);

/// Kernel matrix log||X_i - Y_j|| for planar Gaussian point clouds, X centered
/// at the origin and Y at (mu, mu). Larger mu separates the clouds and
/// shrinks sigma_2/sigma_1.
Matrix log_kernel_gaussian(int n, double mu, RngSeed seed);

/// Deterministic kernel matrix log||X_i - Y_j|| with X_i equispaced on the
/// circle of radius sqrt(2) about (-1,-1) and Y_j on the circle of radius
/// 2*sqrt(2) about (2,2). The circles touch at the origin; the X sampling is
/// phase-shifted by half a step so the tangency point is never sampled by
/// both sets at once and every entry stays finite.
Matrix log_kernel_discs(int n);

/// The 1-norm estimator trap: A = [[alpha, b^T], [b, rho E A_hat E]] with
/// E 1 = 0, so an all-ones start vector never sees the rho block.
Matrix adversarial_hager(int n, double rho, RngSeed seed);

/// Diagonal matrix with sigma_1 = ... = sigma_{k+1} = 1 and a decaying
/// remainder; the fixture on which a zero matrix is an optimal rank-k
/// approximation yet reveals no rank.
Matrix identical_leading(int n, int k);

}  // namespace rsvd
