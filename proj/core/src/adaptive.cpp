#include "rsvd/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsvd/bounds.hpp"
#include "rsvd/svd.hpp"

namespace rsvd {

namespace {

constexpr double kDropFactor = 1e-14;

int ceil_int(double v) { return int(std::ceil(v - 1e-12)); }

double error_proxy(const std::vector<double>& b_sigma, int ell, int p, int k, int q) {
    const double sk = b_sigma[k - 1];
    if (sk == 0.0) return 0.0;
    const double slp = b_sigma[ell - p];  // sigma_{ell-p+1}, 1-based
    return std::pow(slp / sk, 2 * q + 1);
}

}  // namespace

void AdaptiveConfig::validate(int n) const {
    if (k < 1) throw std::invalid_argument("AdaptiveConfig: k >= 1");
    if (q < 1) throw std::invalid_argument("AdaptiveConfig: q >= 1");
    if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("AdaptiveConfig: tau in (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("AdaptiveConfig: delta in (0,1)");
    if (b < 1) throw std::invalid_argument("AdaptiveConfig: b >= 1");
    if (c < 0) throw std::invalid_argument("AdaptiveConfig: c >= 0");
    if (cmax <= k + oversampling_p(delta) + c) {
        throw std::invalid_argument("AdaptiveConfig: cmax must exceed k + p + c");
    }
    const int p = ceil_int(std::log10(2.0 / delta));
    if (c + k + p >= n) {
        throw std::invalid_argument("AdaptiveConfig: initial sample count c+k+p must stay below n");
    }
    if (reorth_period < 1) throw std::invalid_argument("AdaptiveConfig: reorth_period >= 1");
}

BasisUpdate incremental_basis_update(const QrFactors& existing, const Matrix& new_cols) {
    if (new_cols.rows() != existing.q.rows()) {
        throw std::invalid_argument("incremental_basis_update: row counts differ");
    }
    const int m = new_cols.rows();
    const int r = existing.q.cols();
    const int s = new_cols.cols();
    const double scale = fro_norm(new_cols);

    std::vector<std::vector<double>> kept;          // accepted orthonormal columns
    std::vector<std::vector<double>> coeff_q;       // per kept column: r coefficients
    std::vector<std::vector<double>> coeff_prev;    // per kept column: against earlier kept
    std::vector<double> diag;
    int dropped = 0;

    for (int j = 0; j < s; ++j) {
        std::vector<double> v = get_column(new_cols, j);
        std::vector<double> cq(r, 0.0);
        std::vector<double> cp(kept.size(), 0.0);
        for (int pass = 0; pass < 2; ++pass) {
            for (int c = 0; c < r; ++c) {
                double t = 0.0;
                for (int i = 0; i < m; ++i) t += existing.q(i, c) * v[i];
                cq[c] += t;
                for (int i = 0; i < m; ++i) v[i] -= t * existing.q(i, c);
            }
            for (std::size_t c = 0; c < kept.size(); ++c) {
                const double t = vec_dot(kept[c], v);
                cp[c] += t;
                for (int i = 0; i < m; ++i) v[i] -= t * kept[c][i];
            }
        }
        const double nrm = vec_norm2(v);
        if (nrm < kDropFactor * scale) {
            ++dropped;
            continue;
        }
        vec_scale(v, 1.0 / nrm);
        kept.push_back(std::move(v));
        coeff_q.push_back(std::move(cq));
        coeff_prev.push_back(std::move(cp));
        diag.push_back(nrm);
    }

    const int t = int(kept.size());
    BasisUpdate out;
    out.dropped = dropped;
    out.qr.q = Matrix(m, r + t);
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < r; ++c) out.qr.q(i, c) = existing.q(i, c);
    for (int c = 0; c < t; ++c)
        for (int i = 0; i < m; ++i) out.qr.q(i, r + c) = kept[c][i];

    out.qr.r = Matrix(r + t, r + t);
    for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) out.qr.r(i, j) = existing.r(i, j);
    for (int c = 0; c < t; ++c) {
        for (int i = 0; i < r; ++i) out.qr.r(i, r + c) = coeff_q[c][i];
        for (int i = 0; i < c; ++i) out.qr.r(r + i, r + c) = coeff_prev[c][i];
        out.qr.r(r + c, r + c) = diag[c];
    }
    return out;
}

AdaptiveResult adaptive_rsi(const Matrix& a, const AdaptiveConfig& cfg) {
    const int n = a.cols();
    cfg.validate(std::min(a.rows(), n));
    const int p = ceil_int(std::log10(2.0 / cfg.delta));
    const int ceiling = std::min(cfg.cmax, std::min(a.rows(), n));
    const double target = std::sqrt(cfg.tau);

    AdaptiveResult res;
    AdaptiveTrace& trace = res.trace;
    trace.p = p;

    int ell = cfg.c + cfg.k + p;
    int round = 0;
    const Matrix omega0 = gaussian_matrix(n, ell, cfg.seed.derive(round));
    QrFactors basis = stabilized_power_basis(a, omega0, cfg.q, cfg.reorth_period);
    Matrix b = matmul_at_b(basis.q, a);
    long matvec = long(2 * cfg.q + 2) * ell;

    SvdFactors bsvd = exact_svd(b);
    double e = error_proxy(bsvd.sigma, ell, p, cfg.k, cfg.q);
    trace.rounds.push_back(AdaptiveRound{ell, 0, e, matvec});

    trace.status = AdaptiveStatus::converged;
    while (e > target) {
        int delta_ell = cfg.b;
        if (e > 0.0 && e < 1.0) {
            const double expo = std::log(target / e) / std::log(e);
            const double x = double(ell - p + 1);
            const double grown = (std::pow(x / cfg.k, expo) - 1.0) * x;
            delta_ell = std::max(cfg.b, ceil_int(grown));
        }
        if (ell + delta_ell > ceiling) {
            trace.status = AdaptiveStatus::ceiling_hit;
            break;
        }
        ++round;
        const Matrix omega = gaussian_matrix(n, delta_ell, cfg.seed.derive(round));
        const QrFactors fresh = stabilized_power_basis(a, omega, cfg.q, cfg.reorth_period);
        matvec += long(2 * cfg.q + 1) * delta_ell;

        BasisUpdate upd = incremental_basis_update(basis, fresh.q);
        trace.dropped_columns += upd.dropped;
        const int kept = upd.qr.q.cols() - ell;
        if (kept > 0) {
            // Only the new basis columns need a fresh pass of A^T.
            const Matrix extra = columns(upd.qr.q, ell, kept);
            const Matrix rows_new = matmul_at_b(extra, a);
            Matrix b_grown(ell + kept, n);
            for (int i = 0; i < ell; ++i)
                for (int j = 0; j < n; ++j) b_grown(i, j) = b(i, j);
            for (int i = 0; i < kept; ++i)
                for (int j = 0; j < n; ++j) b_grown(ell + i, j) = rows_new(i, j);
            b = std::move(b_grown);
            matvec += kept;
        }
        basis = std::move(upd.qr);
        ell = basis.q.cols();

        bsvd = exact_svd(b);
        e = error_proxy(bsvd.sigma, ell, p, cfg.k, cfg.q);
        trace.rounds.push_back(AdaptiveRound{ell, delta_ell, e, matvec});
    }

    trace.matvec_count = matvec;
    trace.final_ell = ell;

    LowRankApprox& lr = res.approx;
    lr.q_basis = basis.q;
    lr.core_u = columns(bsvd.u, 0, cfg.k);
    lr.v_hat = columns(bsvd.v, 0, cfg.k);
    lr.sigma_hat.assign(bsvd.sigma.begin(), bsvd.sigma.begin() + cfg.k);
    lr.matvec_count = matvec;
    return res;
}

}  // namespace rsvd
