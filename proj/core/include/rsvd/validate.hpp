#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rsvd/bounds.hpp"
#include "rsvd/matrix.hpp"
#include "rsvd/rng.hpp"
#include "rsvd/sketch.hpp"
#include "rsvd/svd.hpp"

namespace rsvd {

struct RankRevealReport {
    bool passed = false;
    double worst_sv_ratio = 0.0;  // min_j sigma_j(B) c2 / sigma_j(A)
    double norm_ratio = 0.0;      // ||A - B||_2 / (c1 sigma_{k+1}(A))
    double c1 = 1.0;
    double c2 = 1.0;
};

/// Pure evaluator against a known spectrum: passes when every leading
/// singular value of B clears sigma_j / c2 and the 2-norm error stays within
/// c1 sigma_{k+1}, both with 1e-10 relative slack.
RankRevealReport check_rank_revealing(const SpectrumView& a_spectrum,
                                      const std::vector<double>& b_sigma, double err_two,
                                      int k, double c1, double c2);
/// Convenience forms that compute the oracle spectrum, sigma(B) and the exact
/// 2-norm error themselves.
RankRevealReport check_rank_revealing(const Matrix& a, const Matrix& b, int k, double c1,
                                      double c2);
RankRevealReport check_rank_revealing(const Matrix& a, const LowRankApprox& b, int k,
                                      double c1, double c2);

struct AuditRow {
    std::string claim;
    double bound = 0.0;
    double actual = 0.0;
    double margin = 0.0;  // (bound - actual) / max(|bound|, tiny); >= -1e-10 passes
    bool holds = false;
    bool available = true;
    bool probabilistic = false;
};

struct AuditReport {
    std::vector<AuditRow> rows;
    bool deterministic_ok = true;   // every available deterministic row holds
    bool probabilistic_ok = true;   // Bernoulli outcomes, aggregate across seeds
    double err_fro = 0.0;
    double err_two = 0.0;
    std::vector<double> sv_true;    // leading k
    std::vector<double> sv_hat;
};

/// Evaluates every bound the run is subject to (deterministic ones only when
/// the start block omega is supplied so the V^T Omega norms can be measured).
AuditReport bound_audit(const Matrix& a, const LowRankApprox& approx, const SketchConfig& cfg,
                        const Matrix* omega = nullptr);

struct TailBoundRow {
    double t = 0.0;
    double bound = 0.0;      // t^{-(p+1)}
    double empirical = 0.0;  // fraction of trials with ||G^+||_2 >= e t sqrt(ell)/(p+1)
    long exceed_count = 0;
};

/// Monte Carlo check of the pseudo-inverse tail bound on (ell-p) x ell
/// Gaussian draws; every trial must also come out full row rank.
std::vector<TailBoundRow> tail_bound_mc(int ell, int p, const std::vector<double>& t_grid,
                                        int trials, RngSeed seed);

struct ExpectationMcResult {
    double mean_norm = 0.0;  // sample mean of ||S G T||_2
    double bound = 0.0;      // ||S||_2 ||T||_F + ||S||_F ||T||_2
};

ExpectationMcResult expectation_mc(int m, int n, const Matrix& s, const Matrix& t, int trials,
                                   RngSeed seed);

struct ConcentrationRow {
    double u = 0.0;
    double bound = 0.0;      // exp(-u^2/2)
    double empirical = 0.0;  // fraction with ||G||_2 >= mean + u
};

struct ConcentrationMcResult {
    double mean_two_norm = 0.0;
    double expectation_bound = 0.0;  // sqrt(m) + sqrt(n)
    std::vector<ConcentrationRow> rows;
};

ConcentrationMcResult concentration_mc(int m, int n, int trials,
                                       const std::vector<double>& u_grid, RngSeed seed);

/// Full SVD of a, cached by content hash so Monte Carlo loops do not redo it.
SvdFactors oracle_spectrum(const Matrix& a);
SpectrumView oracle_spectrum_view(const Matrix& a);

/// Exact ||A - QB_k||_F and ||A - QB_k||_2 of a sketch output.
struct ApproxErrors {
    double fro = 0.0;
    double two = 0.0;
};
ApproxErrors approximation_errors(const Matrix& a, const LowRankApprox& approx);

/// Trials parallelism: honors RSVD_LAB_THREADS (default 1). Each trial owns
/// seed.derive(trial index), so results never depend on the schedule.
int trial_thread_count();
void for_each_trial(int trials, const std::function<void(int)>& body);

/// One-sided binomial slack: 3 standard errors on top of rate p0 at n trials.
double binomial_slack(double p0, int trials);

}  // namespace rsvd
