#pragma once

#include <utility>
#include <vector>

#include "rsvd/matrix.hpp"
#include "rsvd/rng.hpp"

namespace rsvd {

// Desk-scale experiment drivers behind the CLI `experiment` subcommand.
// Everything here is deterministic given its seeds.

struct NormCurvePoint {
    long matvec = 0;
    double rel_error = 0.0;  // |sigma_1 - estimate| / sigma_1
};

struct PowerCompareRun {
    long improved_matvecs = 0;  // iteration-phase matvecs only
    long plain_matvecs = 0;
    long improved_startup = 0;  // one-off cost of the start-vector sketch
    bool improved_converged = false;
    bool plain_converged = false;
    std::vector<NormCurvePoint> improved_curve;
    std::vector<NormCurvePoint> plain_curve;
};

struct PowerCompareResult {
    std::vector<PowerCompareRun> runs;
    double median_improved = 0.0;
    double median_plain = 0.0;
    double median_improved_total = 0.0;  // startup included
    bool improved_no_worse = false;
    double sigma1 = 0.0;
    int n = 0;
    double mu = 0.0;
};

/// Head-to-head 2-norm estimation on a planar log-kernel matrix: the two-stage
/// scheme (rank-1 sketch start, ell1 = 5) against the plain randomized power
/// method, counting iteration matvecs until the estimate is within tol of the
/// oracle sigma_1. The start-vector sketch is a one-off whose cost is reported
/// separately, mirroring how the step counts are usually quoted.
PowerCompareResult power_compare_experiment(int n, double mu, int seeds, double tol,
                                            long max_matvecs, RngSeed matrix_seed,
                                            RngSeed algo_seed);

struct MatvecTableEntry {
    double tol = 0.0;
    int q = 0;
    int ell = 0;
    int blocks = 0;  // block products of ell columns each: 2q+2
    long total = 0;  // blocks * ell
    double achieved = 0.0;
    bool converged = false;
};

struct MatvecTableResult {
    std::vector<MatvecTableEntry> entries;
    bool q_zero_strictly_smallest = false;  // per tolerance, across all q
    int n = 0;
    int k = 0;
};

/// Sample-count table on the deterministic two-disc log kernel: for each
/// (tolerance, q) grow ell until every leading singular value is accurate to
/// tol relative to sigma_1, and report the matvec total of the successful run.
MatvecTableResult matvec_table_experiment(int n, int k, const std::vector<double>& tols,
                                          const std::vector<int>& qs, int ell_step,
                                          RngSeed seed);

struct HagerAdversarialRun {
    double truth = 0.0;       // exact column-sum 1-norm
    double plain = 0.0;       // all-ones start
    double randomized = 0.0;  // sketch-seeded start
};

struct HagerAdversarialResult {
    std::vector<HagerAdversarialRun> runs;
    double worst_plain_ratio = 0.0;  // max over seeds of plain/truth
    double worst_rand_ratio = 1.0;   // min over seeds of randomized/truth
    bool plain_blind = false;        // plain/truth <= 1e-6 in every seed
    bool randomized_within_10 = false;
    int n = 0;
    double rho = 0.0;
};

HagerAdversarialResult hager_adversarial_experiment(int n, double rho, int ell, int seeds,
                                                    RngSeed seed);

struct DeviationMcRun {
    double err_fro = 0.0, err_two = 0.0;
    double bound_fro = 0.0, bound_two = 0.0;
    bool sv_ok = false, fro_ok = false, two_ok = false;
    // Per-run certificates that hold deterministically for every output:
    // the Frobenius-to-2-norm conversion, its singular-value companion, and
    // the singular-value perturbation bound.
    bool rey_two_ok = false, rey_sv_ok = false, hw_ok = false;
    std::vector<double> sigma_hat;
};

struct DeviationMcResult {
    std::vector<DeviationMcRun> runs;
    int violations = 0;  // seeds where any of the three inequalities failed
    double rate = 0.0;
    double threshold = 0.0;  // delta + 3 binomial standard errors
    bool pass = false;
};

/// Monte Carlo audit of the large-deviation bounds on an exponential-decay
/// test matrix: the empirical violation rate must stay within delta plus
/// binomial slack.
DeviationMcResult deviation_mc_experiment(int n, int k, int ell, int p, int q, double delta,
                                          double decay_rate, int seeds, RngSeed matrix_seed,
                                          RngSeed algo_seed);

}  // namespace rsvd
