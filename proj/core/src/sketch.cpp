#include "rsvd/sketch.hpp"

#include <algorithm>
#include <cmath>

namespace rsvd {

namespace {

constexpr double kCollapseFactor = 1e-14;

LowRankApprox finish_from_basis(const Matrix& a, Matrix q_basis, int k, long matvec) {
    // B = Q^T A, then its rank-k truncated SVD; QB_k never gets formed densely.
    const Matrix b = matmul_at_b(q_basis, a);
    const SvdFactors bsvd = exact_svd(b);
    LowRankApprox lr;
    lr.core_u = columns(bsvd.u, 0, k);
    lr.v_hat = columns(bsvd.v, 0, k);
    lr.sigma_hat.assign(bsvd.sigma.begin(), bsvd.sigma.begin() + k);
    lr.q_basis = std::move(q_basis);
    lr.matvec_count = matvec + lr.q_basis.cols();  // the Q^T A pass
    return lr;
}

}  // namespace

void validate_config(const SketchConfig& cfg, int n) {
    if (cfg.k < 1 || cfg.ell < cfg.k || cfg.ell >= n) {
        throw std::invalid_argument("SketchConfig: need 0 < k <= ell < n, got k=" +
                                    std::to_string(cfg.k) + " ell=" + std::to_string(cfg.ell) +
                                    " n=" + std::to_string(n));
    }
    if (cfg.q < 0) throw std::invalid_argument("SketchConfig: q must be >= 0");
    if (cfg.p >= 0 && cfg.p > cfg.ell - cfg.k) {
        throw std::invalid_argument("SketchConfig: p must lie in [0, ell-k]");
    }
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
        throw std::invalid_argument("SketchConfig: delta must lie in (0,1)");
    }
    if (cfg.reorth_period < 1) throw std::invalid_argument("SketchConfig: reorth_period >= 1");
}

Matrix low_rank_product(const LowRankApprox& lr) {
    const Matrix qu = matmul(lr.q_basis, lr.core_u);
    return matmul(scale_columns(qu, lr.sigma_hat), transpose(lr.v_hat));
}

QrFactors stabilized_power_basis(const Matrix& a, const Matrix& omega, int q,
                                 int reorth_period, CollapseInfo* info) {
    if (omega.rows() != a.cols()) {
        throw std::invalid_argument("stabilized_power_basis: omega.rows must equal a.cols");
    }
    if (omega.cols() > std::min(a.rows(), a.cols())) {
        throw std::invalid_argument("stabilized_power_basis: too many sample columns");
    }
    if (q < 0 || reorth_period < 1) {
        throw std::invalid_argument("stabilized_power_basis: bad q or reorth_period");
    }

    Matrix cur = omega;
    QrFactors qr;
    CollapseInfo report;
    const int half_steps = 2 * q + 1;
    for (int h = 1; h <= half_steps; ++h) {
        report.matvec_count += cur.cols();
        cur = (h % 2 == 1) ? matmul(a, cur) : matmul_at_b(a, cur);
        if (h % reorth_period == 0 || h == half_steps) {
            const double scale = fro_norm(cur);
            if (scale == 0.0) throw RankCollapseError(h, 0, 1);
            qr = qr_factor(cur);
            if (min_abs_r_diag(qr) < kCollapseFactor * scale) {
                // Dead directions: rebuild the basis from the SVD and keep
                // only columns carrying numerical rank.
                const SvdFactors f = exact_svd(cur);
                int keep = 0;
                while (keep < int(f.sigma.size()) && f.sigma[keep] >= kCollapseFactor * scale) {
                    ++keep;
                }
                if (keep == 0) throw RankCollapseError(h, 0, 1);
                if (report.first_step == 0) report.first_step = h;
                report.dropped += cur.cols() - keep;
                qr.q = columns(f.u, 0, keep);
                qr.r = Matrix::identity(keep);  // R loses meaning once columns drop
            }
            cur = qr.q;
        }
    }
    if (info != nullptr) *info = report;
    return qr;
}

LowRankApprox basic_randomized(const Matrix& a, int k, int ell, RngSeed seed) {
    SketchConfig cfg;
    cfg.k = k;
    cfg.ell = ell;
    cfg.q = 0;
    cfg.seed = seed;
    return randomized_subspace_iteration(a, cfg);
}

LowRankApprox subspace_iteration(const Matrix& a, const Matrix& omega,
                                 const SketchConfig& cfg) {
    validate_config(cfg, std::min(a.rows(), a.cols()));
    if (omega.rows() != a.cols() || omega.cols() != cfg.ell) {
        throw std::invalid_argument("subspace_iteration: omega must be a.cols x cfg.ell");
    }
    CollapseInfo info;
    const QrFactors qr = stabilized_power_basis(a, omega, cfg.q, cfg.reorth_period, &info);
    if (qr.q.cols() < cfg.k) {
        throw RankCollapseError(info.first_step, qr.q.cols(), cfg.k);
    }
    return finish_from_basis(a, qr.q, cfg.k, info.matvec_count);
}

LowRankApprox randomized_subspace_iteration(const Matrix& a, const SketchConfig& cfg) {
    const Matrix omega = gaussian_matrix(a.cols(), cfg.ell, cfg.seed);
    return subspace_iteration(a, omega, cfg);
}

PowerEstimate power_method(const Matrix& a, const std::vector<double>& omega, int q) {
    if (int(omega.size()) != a.cols()) {
        throw std::invalid_argument("power_method: start vector length must equal a.cols");
    }
    if (vec_norm2(omega) == 0.0) throw std::invalid_argument("power_method: zero start vector");

    Matrix om(a.cols(), 1);
    for (int i = 0; i < a.cols(); ++i) om(i, 0) = omega[i];
    const QrFactors qr = stabilized_power_basis(a, om, q, 1);
    const std::vector<double> row = matvec_transpose(a, get_column(qr.q, 0));
    PowerEstimate est;
    est.norm_estimate = vec_norm2(row);  // the lone singular value of the 1 x n matrix Q^T A
    est.matvec_count = 2 * q + 2;
    return est;
}

PowerEstimate randomized_power_method(const Matrix& a, int q, RngSeed seed) {
    return power_method(a, gaussian_vector(a.cols(), seed), q);
}

LowRankApprox improved_small_k(const Matrix& a, int k, int ell1, int ell2, int q,
                               RngSeed seed) {
    if (!(ell1 > ell2 && ell2 >= k && k >= 1)) {
        throw std::invalid_argument("improved_small_k: need ell1 > ell2 >= k >= 1");
    }
    const LowRankApprox stage1 = basic_randomized(a, ell2, ell1, seed);

    SketchConfig cfg;
    cfg.k = k;
    cfg.ell = ell2;
    cfg.q = q;
    LowRankApprox out = subspace_iteration(a, stage1.v_hat, cfg);
    out.matvec_count += stage1.matvec_count;
    return out;
}

OmegaSplit omega_split_norms(const Matrix& oracle_v, const Matrix& omega, int p) {
    if (oracle_v.rows() != omega.rows()) {
        throw std::invalid_argument("omega_split_norms: V and Omega row counts differ");
    }
    const int ell = omega.cols();
    const int r = oracle_v.cols();
    if (p < 0 || ell - p < 1 || ell - p > r) {
        throw std::invalid_argument("omega_split_norms: p out of range");
    }
    const Matrix omega_hat = matmul_at_b(oracle_v, omega);  // r x ell

    OmegaSplit split;
    split.omega_hat1 = Matrix(ell - p, ell);
    for (int i = 0; i < ell - p; ++i)
        for (int j = 0; j < ell; ++j) split.omega_hat1(i, j) = omega_hat(i, j);
    if (r > ell - p) {
        split.omega_hat2 = Matrix(r - (ell - p), ell);
        for (int i = ell - p; i < r; ++i)
            for (int j = 0; j < ell; ++j) split.omega_hat2(i - (ell - p), j) = omega_hat(i, j);
        split.omega2_norm = exact_svd(split.omega_hat2).sigma.front();
    }

    const SvdFactors s1 = exact_svd(split.omega_hat1);
    const double smax = s1.sigma.front();
    const double smin = s1.sigma.back();
    if (smin <= 1e-13 * smax) {
        split.full_row_rank = false;
        throw std::runtime_error("omega_split_norms: Omega_hat_1 is row-rank deficient");
    }
    split.omega1_pinv_norm = 1.0 / smin;
    return split;
}

}  // namespace rsvd
