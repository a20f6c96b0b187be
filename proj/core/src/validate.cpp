#include "rsvd/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace rsvd {

namespace {

constexpr double kRelSlack = 1e-10;

std::uint64_t content_hash(const Matrix& a) {
    // FNV-1a over dimensions and raw payload bytes.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const unsigned char* p, std::size_t len) {
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    const int dims[2] = {a.rows(), a.cols()};
    mix(reinterpret_cast<const unsigned char*>(dims), sizeof dims);
    mix(reinterpret_cast<const unsigned char*>(a.data()), a.size() * sizeof(double));
    return h;
}

std::mutex g_cache_mutex;
std::unordered_map<std::uint64_t, SvdFactors> g_oracle_cache;
constexpr std::size_t kCacheCap = 32;

AuditRow make_row(std::string claim, double bound, double actual, double scale,
                  bool probabilistic, bool available = true) {
    AuditRow row;
    row.claim = std::move(claim);
    row.bound = bound;
    row.actual = actual;
    row.available = available;
    row.probabilistic = probabilistic;
    const double s = std::max({std::abs(bound), scale, 1e-300});
    row.margin = (bound - actual) / s;
    row.holds = available && row.margin >= -kRelSlack;
    return row;
}

}  // namespace

SvdFactors oracle_spectrum(const Matrix& a) {
    const std::uint64_t h = content_hash(a);
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_oracle_cache.find(h);
        if (it != g_oracle_cache.end()) return it->second;
    }
    SvdFactors f = exact_svd(a);
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    if (g_oracle_cache.size() >= kCacheCap) g_oracle_cache.clear();
    return g_oracle_cache.emplace(h, std::move(f)).first->second;
}

SpectrumView oracle_spectrum_view(const Matrix& a) {
    SpectrumView view;
    view.sigma = oracle_spectrum(a).sigma;
    view.m = std::max(a.rows(), a.cols());
    view.n = std::min(a.rows(), a.cols());
    return view;
}

ApproxErrors approximation_errors(const Matrix& a, const LowRankApprox& approx) {
    const Matrix r = a - low_rank_product(approx);
    return ApproxErrors{fro_norm(r), exact_svd(r).sigma.front()};
}

RankRevealReport check_rank_revealing(const SpectrumView& a_spectrum,
                                      const std::vector<double>& b_sigma, double err_two,
                                      int k, double c1, double c2) {
    if (c1 < 1.0 || c2 < 1.0) throw std::invalid_argument("check_rank_revealing: c1, c2 >= 1");
    if (k < 1 || k >= a_spectrum.n) throw std::invalid_argument("check_rank_revealing: bad k");
    RankRevealReport rep;
    rep.c1 = c1;
    rep.c2 = c2;
    rep.worst_sv_ratio = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= k; ++j) {
        const double sj = a_spectrum.at(j);
        const double bj = j <= int(b_sigma.size()) ? b_sigma[j - 1] : 0.0;
        const double ratio = sj > 0.0 ? bj * c2 / sj : std::numeric_limits<double>::infinity();
        rep.worst_sv_ratio = std::min(rep.worst_sv_ratio, ratio);
    }
    const double sk1 = a_spectrum.at(k + 1);
    rep.norm_ratio = sk1 > 0.0 ? err_two / (c1 * sk1)
                               : (err_two <= kRelSlack * a_spectrum.at(1) ? 0.0
                                  : std::numeric_limits<double>::infinity());
    rep.passed = rep.worst_sv_ratio >= 1.0 - kRelSlack && rep.norm_ratio <= 1.0 + kRelSlack;
    return rep;
}

RankRevealReport check_rank_revealing(const Matrix& a, const Matrix& b, int k, double c1,
                                      double c2) {
    const SpectrumView spec = oracle_spectrum_view(a);
    std::vector<double> b_sigma(k, 0.0);
    if (fro_norm(b) > 0.0) {
        const SvdFactors bf = exact_svd(b);
        for (int j = 0; j < k && j < int(bf.sigma.size()); ++j) b_sigma[j] = bf.sigma[j];
    }
    const double err_two = exact_svd(a - b).sigma.front();
    return check_rank_revealing(spec, b_sigma, err_two, k, c1, c2);
}

RankRevealReport check_rank_revealing(const Matrix& a, const LowRankApprox& b, int k,
                                      double c1, double c2) {
    const SpectrumView spec = oracle_spectrum_view(a);
    const ApproxErrors err = approximation_errors(a, b);
    return check_rank_revealing(spec, b.sigma_hat, err.two, k, c1, c2);
}

AuditReport bound_audit(const Matrix& a, const LowRankApprox& approx, const SketchConfig& cfg,
                        const Matrix* omega) {
    const SvdFactors oracle = oracle_spectrum(a);
    SpectrumView spec;
    spec.sigma = oracle.sigma;
    spec.m = std::max(a.rows(), a.cols());
    spec.n = std::min(a.rows(), a.cols());

    const int k = cfg.k;
    const int ell = cfg.ell;
    const int q = cfg.q;
    const int p = cfg.p >= 0 ? cfg.p : default_p(k, ell, cfg.delta);
    const double s1 = spec.at(1);

    AuditReport rep;
    const ApproxErrors err = approximation_errors(a, approx);
    rep.err_fro = err.fro;
    rep.err_two = err.two;
    rep.sv_hat = approx.sigma_hat;
    rep.sv_true.assign(oracle.sigma.begin(), oracle.sigma.begin() + k);

    // Optimality floor: no rank-k approximation beats the truncated SVD.
    rep.rows.push_back(make_row("optimum: ||A-A_k||_F <= achieved fro error", err.fro,
                                spec.tail_fro(k), s1, false));
    rep.rows.push_back(make_row("optimum: sigma_{k+1} <= achieved two error", err.two,
                                spec.at(k + 1), s1, false));

    // Interlacing: computed singular values never exceed the true ones.
    {
        double worst_bound = 0.0, worst_actual = 0.0, worst_margin = 1e300;
        for (int j = 1; j <= k; ++j) {
            const double b = spec.at(j), act = approx.sigma_hat[j - 1];
            const double margin = (b - act) / std::max({b, s1, 1e-300});
            if (margin < worst_margin) {
                worst_margin = margin;
                worst_bound = b;
                worst_actual = act;
            }
        }
        rep.rows.push_back(
            make_row("interlacing: sigma_hat_j <= sigma_j (worst j)", worst_bound,
                     worst_actual, s1, false));
    }

    // Deterministic bounds need the measured start-matrix norms.
    bool have_split = false;
    OmegaSplit split;
    if (omega != nullptr) {
        split = omega_split_norms(oracle.v, *omega, p);
        have_split = true;
    }
    if (have_split) {
        double worst_margin = 1e300;
        AuditRow worst;
        for (int j = 1; j <= k; ++j) {
            const double lower =
                det_sv_lower(spec, j, ell, p, q, split.omega2_norm, split.omega1_pinv_norm);
            AuditRow row = make_row("det sv lower (worst j)", approx.sigma_hat[j - 1], lower,
                                    s1, false);
            if (row.margin < worst_margin) {
                worst_margin = row.margin;
                worst = row;
            }
        }
        rep.rows.push_back(worst);
        const NormPair det =
            det_lowrank_upper(spec, k, ell, p, q, split.omega2_norm, split.omega1_pinv_norm);
        rep.rows.push_back(make_row("det fro upper", det.fro, err.fro, s1, false));
        rep.rows.push_back(make_row("det two upper", det.two, err.two, s1, false));
    } else {
        AuditRow row;
        row.claim = "det bounds (omega not supplied)";
        row.available = false;
        row.holds = false;
        rep.rows.push_back(row);
    }

    // Large-deviation bounds at the configured failure tolerance.
    {
        const BoundReport dev = deviation_bounds(spec, k, ell, p, q, cfg.delta);
        double worst_margin = 1e300;
        AuditRow worst;
        for (int j = 1; j <= k; ++j) {
            AuditRow row = make_row("deviation sv lower (worst j)", approx.sigma_hat[j - 1],
                                    dev.sv_lower[j - 1], s1, true);
            if (row.margin < worst_margin) {
                worst_margin = row.margin;
                worst = row;
            }
        }
        rep.rows.push_back(worst);
        rep.rows.push_back(make_row("deviation fro upper", dev.fro_upper, err.fro, s1, true));
        rep.rows.push_back(make_row("deviation two upper", dev.two_upper, err.two, s1, true));

        worst_margin = 1e300;
        for (int j = 1; j <= k; ++j) {
            AuditRow row = make_row("qfree sv floor (worst j)", approx.sigma_hat[j - 1],
                                    dev.sv_floor[j - 1], s1, true);
            if (row.margin < worst_margin) {
                worst_margin = row.margin;
                worst = row;
            }
        }
        rep.rows.push_back(worst);
        rep.rows.push_back(
            make_row("qfree two upper", dev.two_upper_qfree, err.two, s1, true));
    }

    // Single-pass reference bound, defined only when ell - k >= 4.
    if (ell - k >= 4) {
        rep.rows.push_back(
            make_row("single-pass two upper", hmt_bound(spec, k, ell - k), err.two, s1, true));
    }

    // Frobenius certificate to 2-norm and singular-value certificates.
    {
        const double tail2 = spec.tail_fro(k) * spec.tail_fro(k);
        const double eta = std::sqrt(std::max(0.0, err.fro * err.fro - tail2));
        const ReverseEyBounds rey = reverse_ey(eta, spec, k);
        rep.rows.push_back(make_row("fro-to-two certificate", rey.two_upper, err.two, s1, false));
        double dev2 = 0.0;
        for (int j = 1; j <= k; ++j) {
            const double d = spec.at(j) - approx.sigma_hat[j - 1];
            dev2 += d * d;
        }
        rep.rows.push_back(
            make_row("sv deviation certificate", rey.sv_dev_upper, std::sqrt(dev2), s1, false));
    }

    // Singular values perturb by no more than the Frobenius error.
    {
        double dev2 = 0.0;
        for (int j = 1; j <= std::min(int(spec.sigma.size()), spec.n); ++j) {
            const double bj = j <= k ? approx.sigma_hat[j - 1] : 0.0;
            const double d = spec.at(j) - bj;
            dev2 += d * d;
        }
        rep.rows.push_back(
            make_row("sv perturbation vs fro error", err.fro, std::sqrt(dev2), s1, false));
    }

    // Truncation chain: projection error <= achieved <= projected-A_k error.
    {
        const Matrix qtqa = matmul(approx.q_basis, matmul_at_b(approx.q_basis, a));
        const double proj = fro_norm(a - qtqa);
        rep.rows.push_back(make_row("truncation dominance (fro)", err.fro, proj, s1, false));

        const Matrix ak = reconstruct(truncate(oracle, k));
        const Matrix qqak = matmul(approx.q_basis, matmul_at_b(approx.q_basis, ak));
        const double chain_hi = fro_norm(a - qqak);
        rep.rows.push_back(make_row("chain upper (fro)", chain_hi, err.fro, s1, false));
    }

    for (const AuditRow& row : rep.rows) {
        if (!row.available) continue;
        if (row.probabilistic) {
            rep.probabilistic_ok = rep.probabilistic_ok && row.holds;
        } else {
            rep.deterministic_ok = rep.deterministic_ok && row.holds;
        }
    }
    return rep;
}

int trial_thread_count() {
    const char* env = std::getenv("RSVD_LAB_THREADS");
    if (env == nullptr) return 1;
    const int v = std::atoi(env);
    return std::clamp(v, 1, 64);
}

void for_each_trial(int trials, const std::function<void(int)>& body) {
    const int threads = std::min(trial_thread_count(), trials);
    if (threads <= 1) {
        for (int i = 0; i < trials; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (int i = t; i < trials; i += threads) body(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

std::vector<TailBoundRow> tail_bound_mc(int ell, int p, const std::vector<double>& t_grid,
                                        int trials, RngSeed seed) {
    if (ell - p < 2) throw std::invalid_argument("tail_bound_mc: need ell - p >= 2");
    if (trials < 100) throw std::invalid_argument("tail_bound_mc: trials >= 100");
    for (double t : t_grid) {
        if (t < 1.0) throw std::invalid_argument("tail_bound_mc: t >= 1");
    }
    std::vector<double> pinv_norm(trials, 0.0);
    for_each_trial(trials, [&](int i) {
        const Matrix g = gaussian_matrix(ell - p, ell, seed.derive(std::uint64_t(i)));
        const SvdFactors f = exact_svd(g);
        pinv_norm[i] = f.sigma.back() > 0.0 ? 1.0 / f.sigma.back()
                                            : std::numeric_limits<double>::infinity();
    });
    for (double v : pinv_norm) {
        if (std::isinf(v)) throw std::runtime_error("tail_bound_mc: rank-deficient draw");
    }
    const double scale = std::exp(1.0) * std::sqrt(double(ell)) / (p + 1);
    std::vector<TailBoundRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        TailBoundRow row;
        row.t = t;
        row.bound = std::pow(t, -double(p + 1));
        for (double v : pinv_norm) {
            if (v >= t * scale) ++row.exceed_count;
        }
        row.empirical = double(row.exceed_count) / trials;
        rows.push_back(row);
    }
    return rows;
}

ExpectationMcResult expectation_mc(int m, int n, const Matrix& s, const Matrix& t, int trials,
                                   RngSeed seed) {
    if (s.cols() != m || t.rows() != n) {
        throw std::invalid_argument("expectation_mc: S must be ? x m and T must be n x ?");
    }
    if (trials < 1) throw std::invalid_argument("expectation_mc: trials >= 1");
    std::vector<double> norm(trials, 0.0);
    const bool s_zero = fro_norm(s) == 0.0;
    const bool t_zero = fro_norm(t) == 0.0;
    for_each_trial(trials, [&](int i) {
        if (s_zero || t_zero) return;
        const Matrix g = gaussian_matrix(m, n, seed.derive(std::uint64_t(i)));
        norm[i] = exact_svd(matmul(s, matmul(g, t))).sigma.front();
    });
    ExpectationMcResult out;
    double sum = 0.0;
    for (double v : norm) sum += v;
    out.mean_norm = sum / trials;
    if (!s_zero && !t_zero) {
        out.bound = two_norm(s) * fro_norm(t) + fro_norm(s) * two_norm(t);
    }
    return out;
}

ConcentrationMcResult concentration_mc(int m, int n, int trials,
                                       const std::vector<double>& u_grid, RngSeed seed) {
    if (trials < 1000) throw std::invalid_argument("concentration_mc: trials >= 1000");
    std::vector<double> norm(trials, 0.0);
    for_each_trial(trials, [&](int i) {
        const Matrix g = gaussian_matrix(m, n, seed.derive(std::uint64_t(i)));
        norm[i] = exact_svd(g).sigma.front();
    });
    ConcentrationMcResult out;
    double sum = 0.0;
    for (double v : norm) sum += v;
    out.mean_two_norm = sum / trials;
    out.expectation_bound = std::sqrt(double(m)) + std::sqrt(double(n));
    for (double u : u_grid) {
        ConcentrationRow row;
        row.u = u;
        row.bound = std::exp(-u * u / 2.0);
        long count = 0;
        for (double v : norm) {
            if (v >= out.mean_two_norm + u) ++count;
        }
        row.empirical = double(count) / trials;
        out.rows.push_back(row);
    }
    return out;
}

double binomial_slack(double p0, int trials) {
    return 3.0 * std::sqrt(std::max(p0 * (1.0 - p0), 0.0) / trials);
}

}  // namespace rsvd
