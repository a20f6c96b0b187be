#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rsvd/testmat.hpp"
#include "rsvd/validate.hpp"
#include "test_util.hpp"

using namespace rsvd;

TEST_CASE("log_kernel_gaussian: deterministic, finite, and mu controls the gap") {
    const Matrix a = log_kernel_gaussian(30, 1.0, RngSeed{1});
    const Matrix b = log_kernel_gaussian(30, 1.0, RngSeed{1});
    CHECK(testutil::max_abs_diff(a, b) == 0.0);
    CHECK(a.is_finite());

    // Larger separation shrinks sigma_2/sigma_1: compare medians over 10 seeds.
    std::vector<double> near_ratio, far_ratio;
    for (int s = 0; s < 10; ++s) {
        const auto f1 = exact_svd(log_kernel_gaussian(60, 1.0, RngSeed{100}.derive(s)));
        const auto f2 = exact_svd(log_kernel_gaussian(60, 2.5, RngSeed{200}.derive(s)));
        near_ratio.push_back(f1.sigma[1] / f1.sigma[0]);
        far_ratio.push_back(f2.sigma[1] / f2.sigma[0]);
    }
    std::sort(near_ratio.begin(), near_ratio.end());
    std::sort(far_ratio.begin(), far_ratio.end());
    CHECK(far_ratio[5] < near_ratio[5]);
}

TEST_CASE("log_kernel_discs: deterministic, finite for touching-circle sizes") {
    const Matrix a = log_kernel_discs(40);
    CHECK(testutil::max_abs_diff(a, log_kernel_discs(40)) == 0.0);
    CHECK(a.is_finite());
    // Multiples of 4 and 8 put sample points nearest the tangency point.
    CHECK(log_kernel_discs(8).is_finite());
    CHECK(log_kernel_discs(12).is_finite());
    CHECK(log_kernel_discs(16).is_finite());
}

TEST_CASE("log_kernel_discs: rigid rotation of both point sets preserves the spectrum") {
    const int n = 24;
    const double r1 = std::sqrt(2.0), r2 = 2.0 * std::sqrt(2.0);
    const double rot = 0.3;
    auto rotated_entry = [&](int i, int j) {
        const double ti = 2.0 * std::numbers::pi * (i + 0.5) / n;
        const double tj = 2.0 * std::numbers::pi * j / n;
        const double c = std::cos(rot), s = std::sin(rot);
        // rotate the fixed construction about the origin
        const double xi0 = -1.0 + r1 * std::cos(ti), yi0 = -1.0 + r1 * std::sin(ti);
        const double xj0 = 2.0 + r2 * std::cos(tj), yj0 = 2.0 + r2 * std::sin(tj);
        const double xi = c * xi0 - s * yi0, yi = s * xi0 + c * yi0;
        const double xj = c * xj0 - s * yj0, yj = s * xj0 + c * yj0;
        return 0.5 * std::log((xi - xj) * (xi - xj) + (yi - yj) * (yi - yj));
    };
    Matrix rotated(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rotated(i, j) = rotated_entry(i, j);
    const std::vector<double> s0 = exact_svd(log_kernel_discs(n)).sigma;
    const std::vector<double> s1 = exact_svd(rotated).sigma;
    for (int j = 0; j < n; ++j) CHECK(std::abs(s0[j] - s1[j]) <= 1e-10 * s0[0]);
}

TEST_CASE("log_kernel_discs: fast spectral decay at n=500") {
    const Matrix a = log_kernel_discs(500);
    const std::vector<double>& sigma = oracle_spectrum(a).sigma;
    CHECK(sigma[50] / sigma[0] <= 1e-4);
}

TEST_CASE("adversarial_hager: the all-ones trap and the hidden rho block") {
    const int n = 100;
    const Matrix a = adversarial_hager(n, 1e10, RngSeed{7});

    // E annihilates the ones vector, so the rho-block column sums cancel to
    // round-off; at rho = 1e10 the residual alias is rho * n * eps levels.
    std::vector<double> ones(n, 1.0);
    const std::vector<double> z = matvec_transpose(a, ones);
    double alpha_plus_b1 = std::abs(a(0, 0));
    for (int i = 1; i < n; ++i) alpha_plus_b1 += std::abs(a(i, 0));
    CHECK(std::abs(z[0] - alpha_plus_b1) <= 1e-6);  // first column sum survives
    const double alias = 1e10 * n * 1e-16 * 100.0;
    for (int j = 1; j < n; ++j) {
        CHECK(std::abs(z[j] - a(0, j)) <= alias);  // rho-block contribution cancels
    }
    // The trap still fires: the blinded column sums stay far below the true norm.
    CHECK(alpha_plus_b1 + alias <= 1e-6 * one_norm(a));

    CHECK(one_norm(a) >= 1e9);
    CHECK(alpha_plus_b1 <= 1e2);

    // rho = 0 leaves only alpha and b: the 1-norm is a plain column-sum max.
    const Matrix a0 = adversarial_hager(20, 0.0, RngSeed{8});
    double best = 0.0;
    for (int j = 0; j < 20; ++j) {
        double s = 0.0;
        for (int i = 0; i < 20; ++i) s += std::abs(a0(i, j));
        best = std::max(best, s);
    }
    CHECK(one_norm(a0) == doctest::Approx(best).epsilon(1e-15));
}

TEST_CASE("decay_matrix: construction is its own oracle") {
    DecaySpec exp_spec;
    exp_spec.model = DecaySpec::Model::exponential;
    exp_spec.rate = 0.5;
    exp_spec.n = 16;
    const DecayMatrix dm = decay_matrix(exp_spec, RngSeed{9});
    const std::vector<double> sigma = exact_svd(dm.matrix).sigma;
    for (int j = 0; j < 16; ++j) {
        CHECK(dm.true_sigma[j] == doctest::Approx(std::pow(0.5, j)).epsilon(1e-15));
        CHECK(sigma[j] == doctest::Approx(dm.true_sigma[j]).epsilon(1e-12));
    }

    DecaySpec pow_spec;
    pow_spec.model = DecaySpec::Model::power_law;
    pow_spec.exponent = 2.0;
    pow_spec.n = 12;
    const DecayMatrix pm = decay_matrix(pow_spec, RngSeed{10});
    for (int s = 2; s < 12; ++s) {
        CHECK(pm.true_sigma[s - 1] / pm.true_sigma[3] ==
              doctest::Approx(std::pow(4.0 / s, 2.0)).epsilon(1e-13));
    }

    const Matrix u = haar_orthogonal(14, RngSeed{11});
    CHECK(orthonormality_defect(u) <= 1e-12);
}

TEST_CASE("decay_matrix: true spectrum matches the oracle at n=64") {
    // Relative recovery of sigma_j bottoms out near eps * sigma_1 / sigma_j,
    // so keep the dynamic range below ~1e5 for a 1e-11 check.
    DecaySpec spec;
    spec.model = DecaySpec::Model::exponential;
    spec.rate = 0.85;
    spec.n = 64;
    const DecayMatrix dm = decay_matrix(spec, RngSeed{12});
    const std::vector<double> sigma = exact_svd(dm.matrix).sigma;
    for (int j = 0; j < 64; ++j) {
        CHECK(std::abs(sigma[j] - dm.true_sigma[j]) <= 1e-11 * dm.true_sigma[j] + 1e-300);
    }
}

TEST_CASE("identical_leading: shape of the fixture") {
    const Matrix a = identical_leading(10, 3);
    for (int j = 0; j <= 3; ++j) CHECK(a(j, j) == 1.0);
    CHECK(a(4, 4) < 1.0);
    CHECK(a(5, 5) < a(4, 4));
    // k = n-1 degenerates to the identity.
    CHECK(testutil::max_abs_diff(identical_leading(6, 5), Matrix::identity(6)) == 0.0);
    CHECK_THROWS_AS(identical_leading(5, 5), std::invalid_argument);
}
