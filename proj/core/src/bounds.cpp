#include "rsvd/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace rsvd {

namespace {

const double kE = std::exp(1.0);

// Integer ceilings of log-derived quantities; the tiny backoff keeps exact
// powers (log10(1000), log2(2048), ...) from rounding up one too far.
int ceil_int(double v) { return int(std::ceil(v - 1e-12)); }

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1)");
    }
}

// The deviation constants stay well defined up to delta = 2, where the
// power factor reaches 1 and the log term vanishes; accept that range so the
// limiting behavior is observable.
void check_delta_wide(double delta) {
    if (!(delta > 0.0 && delta < 2.0)) {
        throw std::invalid_argument("delta must lie in (0,2)");
    }
}

double avg_c1(int n, int ell, int p) {
    return std::sqrt(double(n - ell + p)) + std::sqrt(double(ell)) + 7.0;
}

double avg_c2(int ell, int p) { return 4.0 * kE * std::sqrt(double(ell)) / (p + 1); }

void check_spec_params(const SpectrumView& spec, int k, int ell, int p) {
    if (k < 1 || ell < k || p < 0 || p > ell - k) {
        throw std::invalid_argument("bounds: need 1 <= k <= ell and 0 <= p <= ell-k");
    }
    if (ell > spec.n) throw std::invalid_argument("bounds: ell exceeds n");
}

}  // namespace

double SpectrumView::at(int j) const {
    if (j < 1) throw std::invalid_argument("SpectrumView: index is 1-based");
    return j <= int(sigma.size()) ? sigma[j - 1] : 0.0;
}

void SpectrumView::validate() const {
    if (m < 1 || n < 1) throw std::invalid_argument("SpectrumView: bad dimensions");
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (!std::isfinite(sigma[i]) || sigma[i] < 0.0) {
            throw std::invalid_argument("SpectrumView: entries must be finite and nonnegative");
        }
        if (i > 0 && sigma[i] > sigma[i - 1]) {
            throw std::invalid_argument("SpectrumView: sigma must be nonincreasing");
        }
    }
}

double SpectrumView::tail_fro(int k) const {
    double s = 0.0;
    for (int j = k; j < int(sigma.size()); ++j) s += sigma[j] * sigma[j];
    return std::sqrt(s);
}

PBranch p_branch_of(int p) {
    if (p >= 2) return PBranch::p_ge_2;
    return p == 1 ? PBranch::p_eq_1 : PBranch::p_eq_0;
}

std::string to_string(BoundRegime r) {
    switch (r) {
        case BoundRegime::deterministic: return "deterministic";
        case BoundRegime::average: return "average";
        case BoundRegime::deviation: return "deviation";
        case BoundRegime::hmt: return "hmt";
    }
    return "?";
}

std::string to_string(PBranch b) {
    switch (b) {
        case PBranch::p_ge_2: return "p>=2";
        case PBranch::p_eq_1: return "p=1";
        case PBranch::p_eq_0: return "p=0";
    }
    return "?";
}

int oversampling_p(double delta) {
    check_delta(delta);
    return std::max(0, ceil_int(std::log10(2.0 / delta)) - 1);
}

int default_p(int k, int ell, double delta) {
    if (ell < k) throw std::invalid_argument("default_p: ell < k");
    return std::min(ell - k, oversampling_p(delta));
}

double hmt_bound(const SpectrumView& spec, int k, int p) {
    if (p < 4) throw std::invalid_argument("hmt_bound: requires p = ell - k >= 4");
    if (k < 1) throw std::invalid_argument("hmt_bound: k >= 1");
    const double head = (1.0 + 17.0 * std::sqrt(1.0 + double(k) / p)) * spec.at(k + 1);
    const double tail = 8.0 * std::sqrt(double(k + p)) / (p + 1) * spec.tail_fro(k);
    return head + tail;
}

double det_sv_lower(const SpectrumView& spec, int j, int ell, int p, int q,
                    double omega2_norm, double omega1_pinv_norm) {
    if (j < 1 || j > ell - p) throw std::invalid_argument("det_sv_lower: need 1 <= j <= ell-p");
    if (omega2_norm < 0.0 || omega1_pinv_norm < 0.0) {
        throw std::invalid_argument("det_sv_lower: norms must be nonnegative");
    }
    const double sj = spec.at(j);
    if (sj == 0.0) return 0.0;
    const double w = omega2_norm * omega1_pinv_norm;
    const double tau = spec.at(ell - p + 1) / sj;
    return sj / std::sqrt(1.0 + w * w * std::pow(tau, 4 * q + 2));
}

NormPair det_lowrank_upper(const SpectrumView& spec, int k, int ell, int p, int q,
                           double omega2_norm, double omega1_pinv_norm, bool simplified) {
    check_spec_params(spec, k, ell, p);
    const double s1 = spec.at(1);
    const double sk = spec.at(k);
    const double sk1 = spec.at(k + 1);
    const double slp = spec.at(ell - p + 1);
    const double dhat = spec.tail_fro(k);
    if (s1 == 0.0) return NormPair{0.0, 0.0};

    const double tau_k = sk > 0.0 ? slp / sk : 0.0;
    const double alpha = std::sqrt(double(k)) * slp * std::pow(tau_k, 2 * q);
    const double gamma = (slp / s1) * std::pow(tau_k, 2 * q);
    const double w = omega2_norm * omega1_pinv_norm;
    const double num = alpha * alpha * w * w;
    const double den = simplified ? 1.0 : 1.0 + gamma * gamma * w * w;
    const double extra = num / den;
    return NormPair{std::sqrt(dhat * dhat + extra), std::sqrt(sk1 * sk1 + extra)};
}

double avg_sv_lower(const SpectrumView& spec, int j, int k, int ell, int p, int q) {
    check_spec_params(spec, k, ell, p);
    if (j < 1 || j > k) throw std::invalid_argument("avg_sv_lower: need 1 <= j <= k");
    const double sj = spec.at(j);
    if (sj == 0.0) return 0.0;
    const double tau = spec.at(ell - p + 1) / sj;
    const double c = avg_c1(spec.n, ell, p) * avg_c2(ell, p);
    if (tau == 0.0) return sj;

    switch (p_branch_of(p)) {
        case PBranch::p_ge_2:
            return sj / std::sqrt(1.0 + c * c * std::pow(tau, 4 * q + 2));
        case PBranch::p_eq_1: {
            const double te = std::pow(tau, 4 * q + 2);
            if (te == 0.0) return sj;
            // log sqrt(C^2 + tau^{-(4q+2)}) computed in log space so tiny tau
            // cannot overflow the inner power.
            const double log_term = 0.5 * (std::log1p(c * c * te) - std::log(te));
            return sj / (1.0 + c * c * te * log_term);
        }
        case PBranch::p_eq_0:
            return sj / (1.0 + c * std::pow(tau, 2 * q + 1));
    }
    return 0.0;
}

NormPair avg_lowrank_upper(const SpectrumView& spec, int k, int ell, int p, int q) {
    check_spec_params(spec, k, ell, p);
    const double s1 = spec.at(1);
    const double sk = spec.at(k);
    const double sk1 = spec.at(k + 1);
    const double slp = spec.at(ell - p + 1);
    const double dhat = spec.tail_fro(k);
    if (slp == 0.0 || s1 == 0.0) return NormPair{dhat, sk1};

    const double tau_k = slp / sk;  // sk >= slp > 0 here
    const double c = avg_c1(spec.n, ell, p) * avg_c2(ell, p);

    switch (p_branch_of(p)) {
        case PBranch::p_ge_2: {
            const double extra = double(k) * c * c * slp * slp * std::pow(tau_k, 4 * q);
            return NormPair{std::sqrt(dhat * dhat + extra), std::sqrt(sk1 * sk1 + extra)};
        }
        case PBranch::p_eq_1: {
            auto branch = [&](double base) {
                const double t4 = std::pow(tau_k, 4 * q);
                const double coeff = double(k) * c * c * slp * slp * t4 / base;
                // log sqrt(C^2 + (base/slp)^2 tau^{-4q} / k), all in log space.
                const double logw = 2.0 * std::log(base / slp) - std::log(double(k)) -
                                    4.0 * q * std::log(tau_k);
                const double w = std::exp(logw);
                double log_arg;
                if (std::isinf(w)) {
                    log_arg = logw;  // C^2 negligible against w
                } else {
                    log_arg = std::log(c * c + w);
                }
                return base + coeff * 0.5 * log_arg;
            };
            return NormPair{branch(dhat), branch(sk1)};
        }
        case PBranch::p_eq_0: {
            const double t2 = std::pow(tau_k, 2 * q);
            const double fro =
                dhat + std::sqrt(double(spec.n)) * c * slp * t2 *
                           std::log1p(double(k) * (s1 / dhat) * (s1 / dhat));
            const double two =
                sk1 + std::sqrt(double(k + 1)) * c * slp * t2 *
                          std::log1p(double(k) * (s1 / sk1) * (s1 / sk1));
            return NormPair{fro, two};
        }
    }
    return NormPair{};
}

double deviation_constant(int n, int ell, int p, double delta) {
    check_delta_wide(delta);
    if (ell < 1 || p < 0 || p > ell || n - ell + p < 0) {
        throw std::invalid_argument("deviation_constant: bad n/ell/p");
    }
    const double log2d = std::log(2.0 / delta);
    return kE * std::sqrt(double(ell)) / (p + 1) * std::pow(2.0 / delta, 1.0 / (p + 1)) *
           (std::sqrt(double(n - ell + p)) + std::sqrt(double(ell)) + std::sqrt(2.0 * log2d));
}

BoundReport deviation_bounds(const SpectrumView& spec, int k, int ell, int p, int q,
                             double delta) {
    check_spec_params(spec, k, ell, p);
    BoundReport rep;
    rep.regime = BoundRegime::deviation;
    rep.p_branch = p_branch_of(p);
    rep.constants.c1 = avg_c1(spec.n, ell, p);
    rep.constants.c2 = avg_c2(ell, p);
    rep.constants.c = rep.constants.c1 * rep.constants.c2;
    const double cd = deviation_constant(spec.n, ell, p, delta);
    rep.constants.c_delta = cd;

    const double slp = spec.at(ell - p + 1);
    const double sk = spec.at(k);
    const double sk1 = spec.at(k + 1);
    const double tau_k = sk > 0.0 ? slp / sk : 0.0;

    rep.sv_lower.resize(k);
    rep.sv_floor.resize(k);
    rep.constants.tau.resize(k);
    for (int j = 1; j <= k; ++j) {
        const double sj = spec.at(j);
        const double tau = sj > 0.0 ? slp / sj : 0.0;
        rep.constants.tau[j - 1] = tau;
        rep.sv_lower[j - 1] =
            sj == 0.0 ? 0.0 : sj / std::sqrt(1.0 + cd * cd * std::pow(tau, 4 * q + 2));
        rep.sv_floor[j - 1] = sj / std::sqrt(1.0 + cd * cd);
    }
    const double extra = double(k) * cd * cd * slp * slp * std::pow(tau_k, 4 * q);
    const double dhat = spec.tail_fro(k);
    rep.fro_upper = std::sqrt(dhat * dhat + extra);
    rep.two_upper = std::sqrt(sk1 * sk1 + extra);
    rep.two_upper_qfree = sk1 * std::sqrt(1.0 + double(k) * cd * cd);
    return rep;
}

ReverseEyBounds reverse_ey(double eta, const SpectrumView& spec, int k) {
    if (eta < 0.0) throw std::invalid_argument("reverse_ey: eta must be >= 0");
    const double sk1 = spec.at(k + 1);
    return ReverseEyBounds{std::sqrt(eta * eta + sk1 * sk1), eta, sk1 + eta};
}

double hager_constant(int n, int ell, double delta) {
    check_delta_wide(delta);
    if (ell < 2) throw std::invalid_argument("hager_constant: ell >= 2");
    const double log2d = std::log(2.0 / delta);
    return kE / std::sqrt(double(ell)) * std::pow(2.0 / delta, 1.0 / ell) *
           (std::sqrt(double(n)) + std::sqrt(double(ell)) + std::sqrt(2.0 * log2d));
}

HagerRule hager_ell_rule(int n, double delta) {
    check_delta(delta);
    HagerRule rule;
    rule.ell = std::max(2, ceil_int(std::log2(2.0 / delta)));
    rule.c_hat = hager_constant(n, rule.ell, delta);
    rule.cap = 2.0 * kE * (std::sqrt(double(n) / rule.ell) + 3.0);
    rule.holds = rule.c_hat < rule.cap;
    return rule;
}

double eta_constant() {
    // 1 + 1/x = log x has its root between 2 and 5.
    double lo = 2.0, hi = 5.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = std::log(mid) - 1.0 - 1.0 / mid;
        (g < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

OptimalEll optimal_ell(int k, int p, double t_model) {
    if (k < 1 || p < 0) throw std::invalid_argument("optimal_ell: k >= 1, p >= 0");
    if (t_model <= 0.0) throw std::invalid_argument("optimal_ell: decay exponent must be > 0");

    const double eta = eta_constant();
    // Work in x = ell - p + 1.
    const double lo_x = kE * k;
    const double hi_x = eta * (double(p - 1) + k);
    auto g = [&](double x) { return (x + p - 1) / x + std::log(double(k) / x); };

    if (hi_x < lo_x) {
        throw BracketSignError("optimal_ell: empty bracket for k=" + std::to_string(k) +
                               " p=" + std::to_string(p));
    }
    const double g_lo = g(lo_x);
    const double g_hi = g(hi_x);
    if (g_lo < -1e-9 || g_hi > 1e-9) {
        throw BracketSignError("optimal_ell: bracket endpoints fail the sign condition for k=" +
                               std::to_string(k) + " p=" + std::to_string(p));
    }

    double lo = lo_x, hi = hi_x;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    OptimalEll out;
    const double x = 0.5 * (lo + hi);
    out.ell_opt = x + p - 1;
    out.ell_int = ceil_int(out.ell_opt);
    out.bracket_lo = lo_x + p - 1;
    out.bracket_hi = hi_x + p - 1;
    return out;
}

}  // namespace rsvd
