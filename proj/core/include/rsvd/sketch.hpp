#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rsvd/qr.hpp"
#include "rsvd/rng.hpp"
#include "rsvd/svd.hpp"

namespace rsvd {

/// Parameters shared by all randomized runs. p is the analysis-only split of
/// the oversampling budget; p < 0 means "use default_p from the bounds rules".
struct SketchConfig {
    int k = 1;
    int ell = 2;
    int q = 0;
    int p = -1;
    double delta = 0.05;
    RngSeed seed;
    int reorth_period = 1;
};

/// Throws unless 0 < k <= ell < n, q >= 0, 0 <= p <= ell-k (when set),
/// delta in (0,1), reorth_period >= 1.
void validate_config(const SketchConfig& cfg, int n);

/// Rank-k approximation in factored form: q_basis * core_u * diag(sigma_hat) * v_hat^T.
struct LowRankApprox {
    Matrix q_basis;                 // m x ell, orthonormal
    Matrix core_u;                  // ell x k, orthonormal
    std::vector<double> sigma_hat;  // k nonincreasing values
    Matrix v_hat;                   // n x k, orthonormal
    long matvec_count = 0;          // column applications of A or A^T consumed
};

/// Dense m x n product of the factors.
Matrix low_rank_product(const LowRankApprox& lr);

struct RankCollapseError : std::runtime_error {
    RankCollapseError(int step, int survivors, int needed)
        : std::runtime_error("rank collapse at half-step " + std::to_string(step) + ": only " +
                             std::to_string(survivors) + " independent directions left, " +
                             std::to_string(needed) + " needed"),
          step_index(step) {}
    int step_index;
};

/// Set when a QR step finds R diagonals below 1e-14 * ||Y||_F: the basis lost
/// numerical rank and the dead columns were dropped.
struct CollapseInfo {
    int first_step = 0;  // half-step index of the first drop, 0 = none
    int dropped = 0;
    long matvec_count = 0;  // column applications actually consumed
};

/// Orthonormal basis of (A A^T)^q A Omega. QR re-orthogonalization runs every
/// reorth_period half-steps (period 1 re-orthogonalizes after each product).
/// Columns whose R diagonal falls below 1e-14 * ||Y||_F carry no information
/// and are dropped; the event is reported through `info` when supplied.
/// Throws RankCollapseError when nothing survives.
QrFactors stabilized_power_basis(const Matrix& a, const Matrix& omega, int q,
                                 int reorth_period = 1, CollapseInfo* info = nullptr);

/// Single-pass randomized sketch: Gaussian Omega, Y = A Omega, B = Q^T A,
/// truncate. Equivalent to randomized_subspace_iteration with q = 0.
LowRankApprox basic_randomized(const Matrix& a, int k, int ell, RngSeed seed);

/// Subspace iteration from a caller-supplied start block (cfg.seed unused).
LowRankApprox subspace_iteration(const Matrix& a, const Matrix& omega,
                                 const SketchConfig& cfg);

/// Subspace iteration from a fresh Gaussian start block drawn from cfg.seed.
/// Consumes exactly (2q+2) * ell column applications of A or A^T.
LowRankApprox randomized_subspace_iteration(const Matrix& a, const SketchConfig& cfg);

struct PowerEstimate {
    double norm_estimate = 0.0;
    long matvec_count = 0;
};

/// Power method from a given start vector: basis of (A A^T)^q A omega, then
/// ||Q^T A||_2. Never exceeds ||A||_2 beyond round-off.
PowerEstimate power_method(const Matrix& a, const std::vector<double>& omega, int q);

/// Power method from a Gaussian start vector.
PowerEstimate randomized_power_method(const Matrix& a, int q, RngSeed seed);

/// Two-stage scheme for small k: a cheap single-pass sketch picks the start
/// block (the ell2 leading approximate right singular vectors), then
/// subspace iteration refines it.
LowRankApprox improved_small_k(const Matrix& a, int k, int ell1, int ell2, int q,
                               RngSeed seed);

/// Diagnostic split of V^T Omega into its top (ell-p) x ell and bottom
/// (n-ell+p) x ell blocks, with the two norms every deterministic bound needs.
/// Requires the oracle V; production paths never call this.
struct OmegaSplit {
    Matrix omega_hat1;
    Matrix omega_hat2;
    double omega2_norm = 0.0;       // ||Omega_hat_2||_2
    double omega1_pinv_norm = 0.0;  // ||pinv(Omega_hat_1)||_2
    bool full_row_rank = true;
};

/// Throws std::runtime_error when Omega_hat_1 is row-rank deficient
/// (smallest singular value below 1e-13 of its largest).
OmegaSplit omega_split_norms(const Matrix& oracle_v, const Matrix& omega, int p);

}  // namespace rsvd
