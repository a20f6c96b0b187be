#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rsvd {

/// A spectrum with its matrix shape; pure arithmetic inputs, never triggers
/// an SVD. Indexing is 1-based to match the formulas; indices past the stored
/// length read as zero (exactly low-rank spectra).
struct SpectrumView {
    std::vector<double> sigma;
    int m = 0;
    int n = 0;

    double at(int j) const;  // sigma_j, 1-based
    /// Throws unless sigma is finite, nonnegative and nonincreasing.
    void validate() const;
    /// sqrt(sum_{j>k} sigma_j^2)
    double tail_fro(int k) const;
};

enum class BoundRegime { deterministic, average, deviation, hmt };
enum class PBranch { p_ge_2, p_eq_1, p_eq_0 };

PBranch p_branch_of(int p);
std::string to_string(BoundRegime r);
std::string to_string(PBranch b);

struct BoundConstants {
    double c1 = 0.0;       // sqrt(n-ell+p) + sqrt(ell) + 7
    double c2 = 0.0;       // 4 e sqrt(ell) / (p+1)
    double c = 0.0;        // c1 * c2
    double c_delta = 0.0;  // large-deviation constant (deviation regime only)
    std::vector<double> tau;  // tau_j = sigma_{ell-p+1} / sigma_j, j = 1..k
};

struct BoundReport {
    BoundRegime regime = BoundRegime::average;
    PBranch p_branch = PBranch::p_ge_2;
    std::vector<double> sv_lower;  // per j = 1..k
    double fro_upper = 0.0;
    double two_upper = 0.0;
    BoundConstants constants;
    // q-free floor and two-norm bound that hold regardless of the spectrum.
    std::vector<double> sv_floor;
    double two_upper_qfree = 0.0;
};

/// Oversampling rule p = ceil(log10(2/delta)) - 1, clamped at zero.
int oversampling_p(double delta);

/// Default analysis split when the caller leaves p unset.
int default_p(int k, int ell, double delta);

/// Single-pass sketch bound on the projection error; requires p = ell-k >= 4.
double hmt_bound(const SpectrumView& spec, int k, int p);

/// Per-index singular value lower bound from the measured start-matrix norms.
double det_sv_lower(const SpectrumView& spec, int j, int ell, int p, int q,
                    double omega2_norm, double omega1_pinv_norm);

struct NormPair {
    double fro = 0.0;
    double two = 0.0;
};

/// Approximation-error upper bounds from the measured start-matrix norms.
/// simplified = true drops the stabilizing denominator (valid but looser;
/// only the full form admits average-case analysis for every p).
NormPair det_lowrank_upper(const SpectrumView& spec, int k, int ell, int p, int q,
                           double omega2_norm, double omega1_pinv_norm,
                           bool simplified = false);

/// Expected singular value lower bound; branch picked by p (>=2, =1, =0).
double avg_sv_lower(const SpectrumView& spec, int j, int k, int ell, int p, int q);

/// Expected approximation-error upper bounds, branch picked by p.
NormPair avg_lowrank_upper(const SpectrumView& spec, int k, int ell, int p, int q);

/// C_Delta = (e sqrt(ell)/(p+1)) (2/Delta)^{1/(p+1)}
///           (sqrt(n-ell+p) + sqrt(ell) + sqrt(2 log(2/Delta))).
double deviation_constant(int n, int ell, int p, double delta);

/// All large-deviation bounds at exception probability delta, including the
/// q-free floor sigma_j / sqrt(1 + C_Delta^2) and sigma_{k+1} sqrt(1 + k C_Delta^2).
BoundReport deviation_bounds(const SpectrumView& spec, int k, int ell, int p, int q,
                             double delta);

struct ReverseEyBounds {
    double two_upper = 0.0;         // sqrt(eta^2 + sigma_{k+1}^2)
    double sv_dev_upper = 0.0;      // eta
    double simple_two_upper = 0.0;  // sigma_{k+1} + eta
};

/// Converts a Frobenius-error certificate eta into 2-norm and singular-value
/// error certificates.
ReverseEyBounds reverse_ey(double eta, const SpectrumView& spec, int k);

/// C_hat_Delta = (e/sqrt(ell)) (2/Delta)^{1/ell} (sqrt(n)+sqrt(ell)+sqrt(2 log(2/Delta))).
double hager_constant(int n, int ell, double delta);

/// Sample-count rule ell = ceil(log2(2/delta)) and the closed-form cap
/// 2e (sqrt(n/ell) + 3) it guarantees for hager_constant.
struct HagerRule {
    int ell = 0;
    double c_hat = 0.0;
    double cap = 0.0;
    bool holds = false;
};
HagerRule hager_ell_rule(int n, double delta);

/// Root of 1 + 1/x = log x, computed by bisection.
double eta_constant();

struct OptimalEll {
    double ell_opt = 0.0;
    int ell_int = 0;
    double bracket_lo = 0.0;  // in ell coordinates
    double bracket_hi = 0.0;
};

struct BracketSignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sample count minimizing the per-matvec convergence ratio under the
/// power-law decay model; the optimum does not depend on the decay exponent,
/// so t_model only documents which model the caller assumed. Bisection of
/// g(ell) = ell/(ell-p+1) + log(k/(ell-p+1)) over the analytic bracket
/// ell-p+1 in [e k, eta (p-1+k)]. Throws BracketSignError when the bracket
/// does not straddle the root (happens for p = 0, outside the model's domain).
OptimalEll optimal_ell(int k, int p, double t_model);

}  // namespace rsvd
