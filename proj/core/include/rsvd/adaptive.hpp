#pragma once

#include <vector>

#include "rsvd/qr.hpp"
#include "rsvd/rng.hpp"
#include "rsvd/sketch.hpp"

namespace rsvd {

struct AdaptiveConfig {
    int k = 1;
    int q = 1;
    double tau = 1e-6;    // accuracy tolerance
    double delta = 1e-2;  // failure tolerance, sets p = ceil(log10(2/delta))
    int b = 1;            // minimum batch of fresh samples per round
    int c = 0;            // extra samples in the initial draw
    int cmax = 0;         // sample ceiling
    RngSeed seed;
    int reorth_period = 1;

    void validate(int n) const;
};

enum class AdaptiveStatus { converged, ceiling_hit };

struct AdaptiveRound {
    int ell = 0;          // sample count after this round
    int delta_ell = 0;    // fresh columns drawn this round (0 for the initial sketch)
    double error_proxy = 0.0;
    long matvec_count = 0;  // cumulative column applications
};

struct AdaptiveTrace {
    std::vector<AdaptiveRound> rounds;
    AdaptiveStatus status = AdaptiveStatus::converged;
    long matvec_count = 0;
    int final_ell = 0;
    int p = 0;
    int dropped_columns = 0;
};

struct AdaptiveResult {
    LowRankApprox approx;
    AdaptiveTrace trace;
};

/// Grows the sample count until the singular-value-ratio proxy
/// E = (sigma_{ell-p+1}(B) / sigma_k(B))^(2q+1) drops below sqrt(tau), with
/// batch sizes from the decay-model growth formula (floored at b, undefined
/// exponents fall back to b). Hitting cmax returns the partial result with
/// status ceiling_hit.
AdaptiveResult adaptive_rsi(const Matrix& a, const AdaptiveConfig& cfg);

struct BasisUpdate {
    QrFactors qr;
    int dropped = 0;  // incoming columns numerically inside the existing span
};

/// Enlarges an orthonormal basis by new columns: Gram-Schmidt against the
/// existing basis (twice), then QR of the remainder. Columns whose residual
/// falls below 1e-14 of the block scale are dropped and counted.
BasisUpdate incremental_basis_update(const QrFactors& existing, const Matrix& new_cols);

}  // namespace rsvd
