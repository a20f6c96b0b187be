#include "rsvd/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "rsvd/bounds.hpp"
#include "rsvd/normest.hpp"
#include "rsvd/sketch.hpp"
#include "rsvd/svd.hpp"
#include "rsvd/testmat.hpp"
#include "rsvd/validate.hpp"

namespace rsvd {

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Incremental power iteration: after the initial pair of products the
// estimate refreshes every two matvecs, exactly the 2q+2 cost of a length-q
// run. Records (matvec, rel_error) after each refresh and stops at tol.
long matvecs_to_tol(const Matrix& a, std::vector<double> start, double sigma1, double tol,
                    long upfront, long cap, std::vector<NormCurvePoint>& curve,
                    bool& converged) {
    converged = false;
    long count = upfront;
    const double nv = vec_norm2(start);
    if (nv == 0.0) return count;
    vec_scale(start, 1.0 / nv);
    std::vector<double> au = matvec(a, start);
    ++count;
    while (true) {
        const double nu = vec_norm2(au);
        if (nu == 0.0) return count;
        vec_scale(au, 1.0 / nu);
        std::vector<double> atu = matvec_transpose(a, au);
        ++count;
        const double est = vec_norm2(atu);
        const double rel = std::abs(sigma1 - est) / sigma1;
        curve.push_back(NormCurvePoint{count, rel});
        if (rel <= tol) {
            converged = true;
            return count;
        }
        if (count >= cap) return count;
        vec_scale(atu, 1.0 / est);
        au = matvec(a, atu);
        ++count;
    }
}

}  // namespace

PowerCompareResult power_compare_experiment(int n, double mu, int seeds, double tol,
                                            long max_matvecs, RngSeed matrix_seed,
                                            RngSeed algo_seed) {
    PowerCompareResult out;
    out.n = n;
    out.mu = mu;
    const Matrix a = log_kernel_gaussian(n, mu, matrix_seed);
    out.sigma1 = oracle_spectrum(a).sigma.front();

    std::vector<double> improved, plain, improved_total;
    for (int s = 0; s < seeds; ++s) {
        const RngSeed seed = algo_seed.derive(std::uint64_t(s));
        PowerCompareRun run;

        // Two-stage: a rank-1 single-pass sketch picks the start vector.
        const LowRankApprox stage1 = basic_randomized(a, 1, 5, seed);
        run.improved_startup = stage1.matvec_count;
        run.improved_matvecs =
            matvecs_to_tol(a, get_column(stage1.v_hat, 0), out.sigma1, tol, 0, max_matvecs,
                           run.improved_curve, run.improved_converged);

        // Plain randomized power method.
        run.plain_matvecs =
            matvecs_to_tol(a, gaussian_vector(n, seed.derive(0xBEEF)), out.sigma1, tol, 0,
                           max_matvecs, run.plain_curve, run.plain_converged);

        improved.push_back(double(run.improved_matvecs));
        improved_total.push_back(double(run.improved_matvecs + run.improved_startup));
        plain.push_back(double(run.plain_matvecs));
        out.runs.push_back(std::move(run));
    }
    out.median_improved = median_of(improved);
    out.median_improved_total = median_of(improved_total);
    out.median_plain = median_of(plain);
    out.improved_no_worse = out.median_improved <= out.median_plain;
    return out;
}

MatvecTableResult matvec_table_experiment(int n, int k, const std::vector<double>& tols,
                                          const std::vector<int>& qs, int ell_step,
                                          RngSeed seed) {
    MatvecTableResult out;
    out.n = n;
    out.k = k;
    const Matrix a = log_kernel_discs(n);
    const std::vector<double>& sigma = oracle_spectrum(a).sigma;
    const double s1 = sigma.front();
    const int ell_cap = std::min(a.rows(), a.cols()) - 1;

    for (double tol : tols) {
        for (int q : qs) {
            MatvecTableEntry entry;
            entry.tol = tol;
            entry.q = q;
            entry.blocks = 2 * q + 2;
            int attempt = 0;
            for (int ell = k + ell_step; ell <= ell_cap; ell += ell_step, ++attempt) {
                SketchConfig cfg;
                cfg.k = k;
                cfg.ell = ell;
                cfg.q = q;
                cfg.seed = seed.derive((std::uint64_t(q) << 32) ^ std::uint64_t(ell));
                const LowRankApprox lr = randomized_subspace_iteration(a, cfg);
                double err = 0.0;
                for (int j = 0; j < k; ++j) {
                    err = std::max(err, (sigma[j] - lr.sigma_hat[j]) / s1);
                }
                entry.ell = ell;
                entry.total = long(entry.blocks) * ell;
                entry.achieved = err;
                if (err <= tol) {
                    entry.converged = true;
                    break;
                }
            }
            out.entries.push_back(entry);
        }
    }

    // Strict-ordering check: at every tolerance the q = 0 run is cheaper
    // than every q > 0 run.
    out.q_zero_strictly_smallest = true;
    for (double tol : tols) {
        long q0_total = -1;
        for (const MatvecTableEntry& e : out.entries) {
            if (e.tol == tol && e.q == 0) q0_total = e.total;
        }
        for (const MatvecTableEntry& e : out.entries) {
            if (e.tol == tol && e.q != 0) {
                if (q0_total < 0 || !(q0_total < e.total)) out.q_zero_strictly_smallest = false;
            }
        }
    }
    return out;
}

HagerAdversarialResult hager_adversarial_experiment(int n, double rho, int ell, int seeds,
                                                    RngSeed seed) {
    HagerAdversarialResult out;
    out.n = n;
    out.rho = rho;
    out.worst_plain_ratio = 0.0;
    out.worst_rand_ratio = 1e300;
    for (int s = 0; s < seeds; ++s) {
        const Matrix a = adversarial_hager(n, rho, seed.derive(std::uint64_t(2 * s)));
        HagerAdversarialRun run;
        run.truth = one_norm(a);
        run.plain =
            hager_one_norm(matrix_operator(a), std::vector<double>(n, 1.0 / n), 5).value;
        run.randomized =
            randomized_hager(a, ell, seed.derive(std::uint64_t(2 * s + 1)), 2).value;
        out.worst_plain_ratio = std::max(out.worst_plain_ratio, run.plain / run.truth);
        out.worst_rand_ratio = std::min(out.worst_rand_ratio, run.randomized / run.truth);
        out.runs.push_back(run);
    }
    out.plain_blind = out.worst_plain_ratio <= 1e-6;
    out.randomized_within_10 = out.worst_rand_ratio >= 0.1;
    return out;
}

DeviationMcResult deviation_mc_experiment(int n, int k, int ell, int p, int q, double delta,
                                          double decay_rate, int seeds, RngSeed matrix_seed,
                                          RngSeed algo_seed) {
    DecaySpec spec;
    spec.model = DecaySpec::Model::exponential;
    spec.rate = decay_rate;
    spec.n = n;
    const DecayMatrix dm = decay_matrix(spec, matrix_seed);

    SpectrumView sv;
    sv.sigma = dm.true_sigma;
    sv.m = n;
    sv.n = n;
    const BoundReport rep = deviation_bounds(sv, k, ell, p, q, delta);
    const double s1 = sv.at(1);

    DeviationMcResult out;
    out.runs.resize(seeds);
    for_each_trial(seeds, [&](int s) {
        SketchConfig cfg;
        cfg.k = k;
        cfg.ell = ell;
        cfg.q = q;
        cfg.p = p;
        cfg.delta = delta;
        cfg.seed = algo_seed.derive(std::uint64_t(s));
        const LowRankApprox lr = randomized_subspace_iteration(dm.matrix, cfg);
        const ApproxErrors err = approximation_errors(dm.matrix, lr);
        DeviationMcRun& run = out.runs[s];
        run.err_fro = err.fro;
        run.err_two = err.two;
        run.bound_fro = rep.fro_upper;
        run.bound_two = rep.two_upper;
        run.sigma_hat = lr.sigma_hat;
        run.sv_ok = true;
        for (int j = 0; j < k; ++j) {
            if (lr.sigma_hat[j] < rep.sv_lower[j] - 1e-10 * s1) run.sv_ok = false;
        }
        run.fro_ok = err.fro <= rep.fro_upper + 1e-10 * s1;
        run.two_ok = err.two <= rep.two_upper + 1e-10 * s1;

        const double tail = sv.tail_fro(k);
        const double eta = std::sqrt(std::max(0.0, err.fro * err.fro - tail * tail));
        const ReverseEyBounds rey = reverse_ey(eta, sv, k);
        double dev2 = 0.0;
        for (int j = 1; j <= k; ++j) {
            const double d = sv.at(j) - lr.sigma_hat[j - 1];
            dev2 += d * d;
        }
        run.rey_two_ok = err.two <= rey.two_upper + 1e-10 * s1;
        run.rey_sv_ok = std::sqrt(dev2) <= rey.sv_dev_upper + 1e-10 * s1;
        double hw2 = dev2;
        for (int j = k + 1; j <= n; ++j) hw2 += sv.at(j) * sv.at(j);
        run.hw_ok = std::sqrt(hw2) <= err.fro + 1e-10 * s1;
    });
    for (const DeviationMcRun& run : out.runs) {
        if (!(run.sv_ok && run.fro_ok && run.two_ok)) ++out.violations;
    }
    out.rate = double(out.violations) / seeds;
    out.threshold = delta + binomial_slack(delta, seeds);
    out.pass = out.rate <= out.threshold;
    return out;
}

}  // namespace rsvd
