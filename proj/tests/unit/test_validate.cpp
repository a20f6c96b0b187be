#include <doctest.h>

#include <cmath>

#include "rsvd/testmat.hpp"
#include "rsvd/validate.hpp"
#include "test_util.hpp"

using namespace rsvd;

TEST_CASE("check_rank_revealing: the oracle truncation passes with c1 = c2 = 1") {
    const Matrix a = log_kernel_gaussian(24, 1.0, RngSeed{1});
    const Matrix ak = reconstruct(truncate(oracle_spectrum(a), 4));
    const RankRevealReport rep = check_rank_revealing(a, ak, 4, 1.0, 1.0);
    CHECK(rep.passed);
}

TEST_CASE("check_rank_revealing: B = 0 fails on the identical-leading fixture") {
    const Matrix a = identical_leading(16, 4);
    const Matrix zero(16, 16);
    const RankRevealReport rep = check_rank_revealing(a, zero, 4, 1e6, 1e6);
    CHECK_FALSE(rep.passed);
    CHECK(rep.worst_sv_ratio < 1.0);
}

TEST_CASE("check_rank_revealing: sketched approximations pass with the C_delta factors") {
    const Matrix a = identical_leading(32, 4);
    const int k = 4, ell = 10;
    const double delta = 0.05;
    const int p = default_p(k, ell, delta);
    const double cd = deviation_constant(32, ell, p, delta);
    const double c2 = std::sqrt(1.0 + cd * cd);
    const double c1 = std::sqrt(1.0 + k * cd * cd);
    int pass = 0;
    const int trials = 50;
    for (int t = 0; t < trials; ++t) {
        SketchConfig cfg;
        cfg.k = k;
        cfg.ell = ell;
        cfg.q = 0;
        cfg.seed = RngSeed{100}.derive(t);
        const LowRankApprox lr = randomized_subspace_iteration(a, cfg);
        if (check_rank_revealing(a, lr, k, c1, c2).passed) ++pass;
    }
    CHECK(pass >= int(trials * (0.95 - binomial_slack(0.05, trials))));
}

TEST_CASE("bound_audit: identity input, all rows available with omega supplied") {
    const Matrix a = Matrix::identity(20);
    SketchConfig cfg;
    cfg.k = 3;
    cfg.ell = 8;
    cfg.q = 0;
    cfg.seed = RngSeed{2};
    const Matrix omega = gaussian_matrix(20, 8, cfg.seed);
    const LowRankApprox lr = subspace_iteration(a, omega, cfg);
    const AuditReport rep = bound_audit(a, lr, cfg, &omega);
    CHECK(rep.deterministic_ok);
    CHECK(rep.err_two == doctest::Approx(1.0).epsilon(1e-12));
    for (const AuditRow& row : rep.rows) {
        if (!row.available) continue;
        INFO(row.claim);
        CHECK(row.holds);
    }
}

TEST_CASE("bound_audit: exact low-rank input forces exact capture") {
    DecaySpec spec;
    spec.model = DecaySpec::Model::custom;
    spec.custom_sigma = {5.0, 3.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const DecayMatrix dm = decay_matrix(spec, RngSeed{3});
    SketchConfig cfg;
    cfg.k = 3;
    cfg.ell = 6;
    cfg.q = 0;
    cfg.seed = RngSeed{4};
    const Matrix omega = gaussian_matrix(10, 6, cfg.seed);
    const LowRankApprox lr = subspace_iteration(dm.matrix, omega, cfg);
    const AuditReport rep = bound_audit(dm.matrix, lr, cfg, &omega);
    CHECK(rep.err_fro <= 1e-10 * fro_norm(dm.matrix));
    CHECK(rep.deterministic_ok);
}

TEST_CASE("bound_audit: deterministic rows are marked unavailable without omega") {
    const Matrix a = log_kernel_gaussian(20, 1.0, RngSeed{5});
    SketchConfig cfg;
    cfg.k = 2;
    cfg.ell = 6;
    cfg.q = 1;
    cfg.seed = RngSeed{6};
    const LowRankApprox lr = randomized_subspace_iteration(a, cfg);
    const AuditReport rep = bound_audit(a, lr, cfg, nullptr);
    bool saw_unavailable = false;
    for (const AuditRow& row : rep.rows) saw_unavailable |= !row.available;
    CHECK(saw_unavailable);
}

TEST_CASE("tail_bound_mc: t = 1 is trivial; small grid behaves") {
    const auto rows = tail_bound_mc(12, 2, {1.0, 2.0}, 400, RngSeed{7});
    CHECK(rows[0].bound == 1.0);
    CHECK(rows[0].empirical <= 1.0);
    CHECK(rows[1].bound == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(rows[1].empirical <= rows[1].bound + binomial_slack(rows[1].bound, 400));
    CHECK_THROWS_AS(tail_bound_mc(12, 11, {2.0}, 400, RngSeed{8}), std::invalid_argument);
    CHECK_THROWS_AS(tail_bound_mc(12, 2, {0.5}, 400, RngSeed{9}), std::invalid_argument);
}

TEST_CASE("expectation_mc: scalar case has the half-normal mean") {
    const Matrix one(1, 1, {1.0});
    const ExpectationMcResult res = expectation_mc(1, 1, one, one, 20000, RngSeed{10});
    CHECK(res.mean_norm == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.02));
    CHECK(res.bound == doctest::Approx(2.0).epsilon(1e-14));

    const Matrix zero(1, 1, {0.0});
    const ExpectationMcResult z = expectation_mc(1, 1, zero, one, 100, RngSeed{11});
    CHECK(z.mean_norm == 0.0);
    CHECK(z.bound == 0.0);
}

TEST_CASE("expectation_mc: random S, T stay below the bound") {
    const Matrix s = gaussian_matrix(8, 8, RngSeed{12});
    const Matrix t = gaussian_matrix(8, 8, RngSeed{13});
    const ExpectationMcResult res = expectation_mc(8, 8, s, t, 2000, RngSeed{14});
    CHECK(res.mean_norm <= res.bound);
}

TEST_CASE("concentration_mc: exceedance frequencies below the Gaussian tail") {
    const auto res = concentration_mc(20, 12, 2000, {0.0, 1.0, 2.0}, RngSeed{15});
    CHECK(res.rows[0].bound == 1.0);
    for (const auto& row : res.rows) {
        CHECK(row.empirical <= row.bound + binomial_slack(row.bound, 2000));
    }
    CHECK(res.mean_two_norm <= res.expectation_bound);
}

TEST_CASE("oracle_spectrum cache returns identical factors for identical content") {
    const Matrix a = gaussian_matrix(10, 6, RngSeed{16});
    const SvdFactors& f1 = oracle_spectrum(a);
    Matrix b = a;  // separate allocation, same bytes
    const SvdFactors& f2 = oracle_spectrum(b);
    CHECK(f1.sigma == f2.sigma);
}

TEST_CASE("for_each_trial covers every index exactly once") {
    std::vector<int> hits(100, 0);
    for_each_trial(100, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK(binomial_slack(0.1, 500) == doctest::Approx(3.0 * std::sqrt(0.09 / 500)).epsilon(1e-12));
}
