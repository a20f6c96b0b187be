#include <doctest.h>

#include <cmath>

#include "rsvd/bounds.hpp"

using namespace rsvd;

namespace {

SpectrumView make_spec(std::vector<double> sigma, int m, int n) {
    SpectrumView s;
    s.sigma = std::move(sigma);
    s.m = m;
    s.n = n;
    s.validate();
    return s;
}

SpectrumView flat_spec(int n) { return make_spec(std::vector<double>(n, 1.0), n, n); }

}  // namespace

TEST_CASE("oversampling_p: rule values and domain") {
    CHECK(oversampling_p(1e-16) == 16);
    CHECK(oversampling_p(0.2) == 0);
    CHECK(oversampling_p(2e-3) == 2);
    CHECK_THROWS_AS(oversampling_p(0.0), std::invalid_argument);
    CHECK_THROWS_AS(oversampling_p(1.0), std::invalid_argument);
}

TEST_CASE("hmt_bound: zero tail, flat spectrum, monotonicity, domain") {
    const SpectrumView rank2 = make_spec({3.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 7, 7);
    CHECK(hmt_bound(rank2, 2, 4) == 0.0);

    // Flat ones, n=10, k=2, p=4: (1+17*sqrt(1.5)) + (8*sqrt(6)/5)*sqrt(8).
    CHECK(hmt_bound(flat_spec(10), 2, 4) == doctest::Approx(32.90578798209783).epsilon(1e-12));

    // Shrinking any tail value never increases the bound.
    SpectrumView shrunk = flat_spec(10);
    for (int j = 3; j < 10; ++j) shrunk.sigma[j] = 0.5;
    CHECK(hmt_bound(shrunk, 2, 4) <= hmt_bound(flat_spec(10), 2, 4));

    CHECK_THROWS_AS(hmt_bound(flat_spec(10), 2, 3), std::invalid_argument);
}

TEST_CASE("det_sv_lower: aligned, exact-rank, and hand-checked cases") {
    const SpectrumView spec = make_spec({2.0, 1.5, 1.0, 0.5}, 6, 4);
    // Perfectly aligned start matrix: zero norms give back sigma_j.
    CHECK(det_sv_lower(spec, 1, 3, 1, 0, 0.0, 0.0) == 2.0);
    // sigma_{ell-p+1} = 0: exact rank.
    const SpectrumView rank2 = make_spec({2.0, 1.0, 0.0, 0.0}, 6, 4);
    CHECK(det_sv_lower(rank2, 1, 3, 1, 2, 5.0, 7.0) == 2.0);
    // sigma_j = 2, sigma_{ell-p+1} = 1, q = 0, w = 3: 2/sqrt(1+9/4).
    const SpectrumView hand = make_spec({2.0, 1.0, 1.0}, 5, 3);
    CHECK(det_sv_lower(hand, 1, 2, 0, 0, 3.0, 1.0) ==
          doctest::Approx(1.1094003924504583).epsilon(1e-13));
    CHECK(det_sv_lower(make_spec({0.0, 0.0}, 4, 2), 1, 2, 0, 0, 1.0, 1.0) == 0.0);
}

TEST_CASE("det_lowrank_upper: optimal limits and hand-checked value") {
    const SpectrumView spec = make_spec({2.0, 1.0, 1.0}, 5, 3);
    // w = 0 collapses to the optimal errors.
    const NormPair opt = det_lowrank_upper(spec, 1, 2, 0, 0, 0.0, 0.0);
    CHECK(opt.fro == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(opt.two == doctest::Approx(1.0).epsilon(1e-14));
    // sigma_{ell-p+1} = 0: alpha = 0, optimal again.
    const SpectrumView rank1 = make_spec({2.0, 0.0, 0.0}, 5, 3);
    const NormPair r1 = det_lowrank_upper(rank1, 1, 2, 0, 1, 9.0, 9.0);
    CHECK(r1.fro == 0.0);
    CHECK(r1.two == 0.0);
    // k=1, sigma=(2,1,1), ell-p = 2, q=0, w=1: fro = sqrt(2 + 1/1.25).
    const NormPair hand = det_lowrank_upper(spec, 1, 2, 0, 0, 1.0, 1.0);
    CHECK(hand.fro == doctest::Approx(1.6733200530681511).epsilon(1e-13));
    // Simplified form drops the denominator and is never tighter.
    const NormPair simp = det_lowrank_upper(spec, 1, 2, 0, 0, 1.0, 1.0, true);
    CHECK(simp.fro >= hand.fro);
    CHECK(simp.two >= hand.two);
}

TEST_CASE("avg_sv_lower: limits, floor, and the frozen n=100 case") {
    const SpectrumView spec = make_spec({2.0, 1.0, 0.0, 0.0, 0.0}, 8, 5);
    // tau_j = 0 in every branch returns sigma_j.
    for (int p : {0, 1, 2}) CHECK(avg_sv_lower(spec, 1, 2, 4, p, 0) == 2.0);

    // Flat spectrum, tau = 1, q = 0, p >= 2: the distribution-free floor.
    SpectrumView flat100 = flat_spec(100);
    const double c1 = std::sqrt(96.0) + std::sqrt(20.0) + 7.0;
    const double c2 = 4.0 * std::exp(1.0) * std::sqrt(20.0) / 17.0;
    const double c = c1 * c2;
    CHECK(avg_sv_lower(flat100, 1, 4, 20, 16, 0) ==
          doctest::Approx(1.0 / std::sqrt(1.0 + c * c)).epsilon(1e-13));

    // n=100, ell=20, p=16, tau_j = 1/2, q=1: factor 0.13036...
    std::vector<double> sig(100, 0.0);
    for (int j = 0; j < 100; ++j) sig[j] = (j < 4) ? 1.0 : 0.5;
    const SpectrumView half = make_spec(sig, 100, 100);
    CHECK(avg_sv_lower(half, 1, 4, 20, 16, 1) ==
          doctest::Approx(0.1303699739637586).epsilon(1e-12));
}

TEST_CASE("avg_sv_lower: branch formulas at p=1 and p=0") {
    // Geometric spectrum; compare against direct evaluation of the printed forms.
    std::vector<double> sig(12);
    for (int j = 0; j < 12; ++j) sig[j] = std::pow(0.8, j);
    const SpectrumView spec = make_spec(sig, 12, 12);
    const int k = 3, ell = 6, q = 1;
    for (int p : {0, 1}) {
        const double c1 = std::sqrt(double(12 - ell + p)) + std::sqrt(double(ell)) + 7.0;
        const double c2 = 4.0 * std::exp(1.0) * std::sqrt(double(ell)) / (p + 1);
        const double c = c1 * c2;
        for (int j = 1; j <= k; ++j) {
            const double sj = sig[j - 1];
            const double tau = sig[ell - p] / sj;
            double expected;
            if (p == 1) {
                const double te = std::pow(tau, 4 * q + 2);
                expected = sj / (1.0 + c * c * te * std::log(std::sqrt(c * c + 1.0 / te)));
            } else {
                expected = sj / (1.0 + c * std::pow(tau, 2 * q + 1));
            }
            CHECK(avg_sv_lower(spec, j, k, ell, p, q) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("avg_lowrank_upper: exact-rank and flat-tail cases") {
    // Rank-k spectrum: both errors vanish on the p >= 2 branch.
    const SpectrumView rank2 = make_spec({3.0, 1.0, 0.0, 0.0, 0.0, 0.0}, 9, 6);
    const NormPair z = avg_lowrank_upper(rank2, 2, 4, 2, 0);
    CHECK(z.fro == 0.0);
    CHECK(z.two == 0.0);

    // Flat tail of ones, k = 1, q = 0, p >= 2: fro = sqrt(n - 1 + C^2).
    const int n = 30, ell = 8, p = 2;
    const SpectrumView flat = flat_spec(n);
    const double c1 = std::sqrt(double(n - ell + p)) + std::sqrt(double(ell)) + 7.0;
    const double c2 = 4.0 * std::exp(1.0) * std::sqrt(double(ell)) / (p + 1);
    const double c = c1 * c2;
    CHECK(avg_lowrank_upper(flat, 1, ell, p, 0).fro ==
          doctest::Approx(std::sqrt(n - 1.0 + c * c)).epsilon(1e-13));
}

TEST_CASE("avg_lowrank_upper: p=0 two-norm branch, hand-evaluated") {
    // k=1, sigma=(2,1,1,...), n=10, ell=2, p=0, q=1.
    std::vector<double> sig(10, 1.0);
    sig[0] = 2.0;
    const SpectrumView spec = make_spec(sig, 10, 10);
    const double c1 = std::sqrt(8.0) + std::sqrt(2.0) + 7.0;
    const double c2 = 4.0 * std::exp(1.0) * std::sqrt(2.0);
    const double c = c1 * c2;
    const double tau = 0.5;
    const double expected = 1.0 + std::sqrt(2.0) * c * 1.0 * tau * tau * std::log(1.0 + 4.0);
    CHECK(avg_lowrank_upper(spec, 1, 2, 0, 1).two ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(avg_lowrank_upper(spec, 1, 2, 0, 1).two ==
          doctest::Approx(99.37098860488628).epsilon(1e-10));
}

TEST_CASE("deviation_constant: frozen value, limits, monotonicity in p") {
    CHECK(deviation_constant(100, 20, 16, 1e-2) ==
          doctest::Approx(17.11519180193525).epsilon(1e-12));
    // Delta -> 2^-: the power factor tends to 1 and the log term to 0.
    const double near2 = deviation_constant(100, 20, 16, 1.9999999);
    const double limit = std::exp(1.0) * std::sqrt(20.0) / 17.0 *
                         (std::sqrt(96.0) + std::sqrt(20.0));
    CHECK(near2 == doctest::Approx(limit).epsilon(1e-3));
    CHECK(deviation_constant(100, 20, 16, 1e-2) < deviation_constant(100, 20, 2, 1e-2));
}

TEST_CASE("deviation_bounds: exact rank, floor, and the frozen factor") {
    // sigma_{ell-p+1} = 0: sv bound returns sigma_j, two bound sigma_{k+1}.
    const SpectrumView rank3 = make_spec({4.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 8, 8);
    const BoundReport rep = deviation_bounds(rank3, 2, 5, 2, 1, 0.1);
    CHECK(rep.sv_lower[0] == 4.0);
    CHECK(rep.sv_lower[1] == 2.0);
    CHECK(rep.two_upper == 1.0);

    // Cor floor: sv_lower >= sigma_j / sqrt(1 + C_Delta^2) always.
    const SpectrumView flat = flat_spec(64);
    const BoundReport f = deviation_bounds(flat, 4, 12, 4, 0, 0.05);
    for (int j = 0; j < 4; ++j) {
        CHECK(f.sv_lower[j] >= f.sv_floor[j] - 1e-15);
        CHECK(f.sv_floor[j] ==
              doctest::Approx(1.0 / std::sqrt(1.0 + f.constants.c_delta * f.constants.c_delta))
                  .epsilon(1e-13));
    }

    // n=100, ell=20, p=16, q=1, delta=1e-2, sigma_j=1, sigma_{ell-p+1}=0.1.
    std::vector<double> sig(100, 0.1);
    for (int j = 0; j < 4; ++j) sig[j] = 1.0;
    const SpectrumView s = make_spec(sig, 100, 100);
    const BoundReport d = deviation_bounds(s, 4, 20, 16, 1, 1e-2);
    CHECK(d.sv_lower[0] == doctest::Approx(0.9998535672748868).epsilon(1e-12));

    // Tighter delta loosens every bound.
    const BoundReport loose = deviation_bounds(s, 4, 20, 16, 1, 1e-4);
    CHECK(loose.constants.c_delta > d.constants.c_delta);
    CHECK(loose.sv_lower[0] < d.sv_lower[0]);
    CHECK(loose.two_upper > d.two_upper);
}

TEST_CASE("reverse_ey: limiting and quadratic-gain cases") {
    const SpectrumView spec = make_spec({3.0, 1.0, 0.5}, 5, 3);
    const ReverseEyBounds zero = reverse_ey(0.0, spec, 1);
    CHECK(zero.two_upper == 1.0);
    CHECK(zero.sv_dev_upper == 0.0);

    const ReverseEyBounds equal = reverse_ey(1.0, spec, 1);
    CHECK(equal.two_upper == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    // eta = 0.1, sigma_{k+1} = 1: sqrt(1.01) beats the additive 1.1.
    const ReverseEyBounds small = reverse_ey(0.1, spec, 1);
    CHECK(small.two_upper == doctest::Approx(std::sqrt(1.01)).epsilon(1e-14));
    CHECK(small.two_upper < small.simple_two_upper);
    CHECK(small.simple_two_upper == doctest::Approx(1.1).epsilon(1e-14));
    CHECK_THROWS_AS(reverse_ey(-0.1, spec, 1), std::invalid_argument);
}

TEST_CASE("hager_constant: frozen value, limit, and the ell rule") {
    CHECK(hager_constant(100, 5, 0.02) == doctest::Approx(46.63100175697514).epsilon(1e-12));
    // Delta -> 2^-: (e/sqrt(ell)) (sqrt(n) + sqrt(ell)).
    const double lim = std::exp(1.0) / std::sqrt(5.0) * (10.0 + std::sqrt(5.0));
    CHECK(hager_constant(100, 5, 1.9999999) == doctest::Approx(lim).epsilon(1e-3));

    const HagerRule rule = hager_ell_rule(200, 1e-3);
    CHECK(rule.ell == 11);
    CHECK(rule.c_hat == doctest::Approx(34.93385013861961).epsilon(1e-12));
    CHECK(rule.holds);
    CHECK(rule.cap == doctest::Approx(39.49127629411055).epsilon(1e-12));
}

TEST_CASE("optimal_ell: analytic case, bracket containment, eta root") {
    const OptimalEll e_case = optimal_ell(1, 1, 2.0);
    CHECK(e_case.ell_opt == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
    CHECK(e_case.ell_int == 3);

    const OptimalEll k10 = optimal_ell(10, 1, 2.0);
    const double x = k10.ell_opt - 1 + 1;  // ell - p + 1 with p = 1
    CHECK(x >= 10.0 * std::exp(1.0) - 1e-6);
    CHECK(x <= 10.0 * eta_constant() + 1e-6);

    CHECK(eta_constant() == doctest::Approx(3.591121476668622).epsilon(1e-10));

    // p = 0 sits outside the decay model's domain: the bracket cannot
    // straddle the root there and the sign-condition error fires.
    CHECK_THROWS_AS(optimal_ell(1, 0, 2.0), BracketSignError);
    CHECK_THROWS_AS(optimal_ell(8, 0, 2.0), BracketSignError);
}

TEST_CASE("bound monotonicity: avg_sv_lower grows with q and shrinks with tau") {
    std::vector<double> sig(40);
    for (int j = 0; j < 40; ++j) sig[j] = std::pow(0.85, j);
    const SpectrumView spec = make_spec(sig, 40, 40);
    const int k = 3, ell = 10, p = 3;
    double prev = 0.0;
    for (int q = 0; q <= 4; ++q) {
        const double b = avg_sv_lower(spec, 2, k, ell, p, q);
        CHECK(b >= prev);
        prev = b;
    }
    // j with larger sigma_j has smaller tau_j, hence a tighter (larger) ratio.
    const double b1 = avg_sv_lower(spec, 1, k, ell, p, 1) / spec.at(1);
    const double b3 = avg_sv_lower(spec, 3, k, ell, p, 1) / spec.at(3);
    CHECK(b1 >= b3);
}

TEST_CASE("every upper bound dominates the optimum; every sv bound stays below sigma_j") {
    std::vector<double> sig(24);
    for (int j = 0; j < 24; ++j) sig[j] = std::pow(0.7, j);
    const SpectrumView spec = make_spec(sig, 24, 24);
    const int k = 3, ell = 9;
    const double opt_fro = spec.tail_fro(k);
    const double opt_two = spec.at(k + 1);
    for (int p : {0, 1, 2, 4}) {
        for (int q : {0, 1, 2}) {
            const NormPair avg = avg_lowrank_upper(spec, k, ell, p, q);
            CHECK(avg.fro >= opt_fro - 1e-12);
            CHECK(avg.two >= opt_two - 1e-12);
            const BoundReport dev = deviation_bounds(spec, k, ell, p, q, 0.1);
            CHECK(dev.fro_upper >= opt_fro - 1e-12);
            CHECK(dev.two_upper >= opt_two - 1e-12);
            for (int j = 1; j <= k; ++j) {
                CHECK(avg_sv_lower(spec, j, k, ell, p, q) <= spec.at(j) + 1e-12);
                CHECK(dev.sv_lower[j - 1] <= spec.at(j) + 1e-12);
            }
        }
    }
}

TEST_CASE("default_p follows the oversampling rule until ell-k caps it") {
    CHECK(default_p(4, 20, 1e-16) == 16);
    CHECK(default_p(4, 8, 1e-16) == 4);
    CHECK(default_p(4, 8, 0.2) == 0);
}
