#include <doctest.h>

#include <cmath>

#include "rsvd/adaptive.hpp"
#include "rsvd/testmat.hpp"
#include "rsvd/validate.hpp"
#include "test_util.hpp"

using namespace rsvd;

namespace {

AdaptiveConfig make_cfg(int k, int q, double tau, int cmax, std::uint64_t seed) {
    AdaptiveConfig cfg;
    cfg.k = k;
    cfg.q = q;
    cfg.tau = tau;
    cfg.delta = 1e-2;
    cfg.b = 2;
    cfg.c = 0;
    cfg.cmax = cmax;
    cfg.seed = RngSeed{seed};
    return cfg;
}

}  // namespace

TEST_CASE("incremental_basis_update: in-span, complement, and random blocks") {
    const Matrix y = gaussian_matrix(20, 6, RngSeed{1});
    const QrFactors base = qr_factor(y);

    // Columns already inside the span contribute nothing.
    const Matrix in_span = matmul(y, gaussian_matrix(6, 3, RngSeed{2}));
    const BasisUpdate none = incremental_basis_update(base, in_span);
    CHECK(none.dropped == 3);
    CHECK(none.qr.q.cols() == 6);

    // An orthogonal-complement block grows the basis by its full width.
    Matrix comp(20, 2);
    {
        Matrix cand = gaussian_matrix(20, 2, RngSeed{3});
        cand = cand - matmul(base.q, matmul_at_b(base.q, cand));
        const QrFactors cf = qr_factor(cand);
        comp = cf.q;
    }
    const BasisUpdate grow = incremental_basis_update(base, comp);
    CHECK(grow.dropped == 0);
    CHECK(grow.qr.q.cols() == 8);
    CHECK(orthonormality_defect(grow.qr.q) <= 1e-12);

    // Random enlargement matches a from-scratch QR of the concatenation.
    const Matrix fresh = gaussian_matrix(20, 4, RngSeed{4});
    const BasisUpdate upd = incremental_basis_update(base, fresh);
    const QrFactors scratch = qr_factor(hcat(y, fresh));
    CHECK(upd.qr.q.cols() == 10);
    CHECK(testutil::max_principal_angle(scratch.q, upd.qr.q) <= 1e-10);
    // The stitched R reproduces the concatenation.
    CHECK(testutil::max_abs_diff(matmul(upd.qr.q, upd.qr.r), hcat(matmul(base.q, base.r), fresh)) <=
          1e-12 * (1.0 + fro_norm(y)));
}

TEST_CASE("adaptive_rsi: immediate convergence when the first sketch is enough") {
    // sigma_{ell-p+1}/sigma_k is already far below sqrt(tau) at the initial ell.
    DecaySpec spec;
    spec.model = DecaySpec::Model::exponential;
    spec.rate = 0.05;
    spec.n = 60;
    const DecayMatrix dm = decay_matrix(spec, RngSeed{5});
    const AdaptiveConfig cfg = make_cfg(3, 1, 1e-6, 50, 6);
    const AdaptiveResult res = adaptive_rsi(dm.matrix, cfg);
    CHECK(res.trace.status == AdaptiveStatus::converged);
    CHECK(res.trace.rounds.size() == 1);
    const int p = res.trace.p;
    CHECK(res.trace.final_ell == cfg.c + cfg.k + p);
    CHECK(res.trace.matvec_count == long(2 * cfg.q + 2) * res.trace.final_ell);
}

TEST_CASE("adaptive_rsi: flat spectrum runs to the ceiling in b-sized batches") {
    const Matrix a = Matrix::identity(64);
    const AdaptiveConfig cfg = make_cfg(4, 1, 1e-6, 40, 7);
    const AdaptiveResult res = adaptive_rsi(a, cfg);
    CHECK(res.trace.status == AdaptiveStatus::ceiling_hit);
    CHECK(res.trace.final_ell <= 40);
    // Every growth round fell back to the minimum batch.
    for (std::size_t r = 1; r < res.trace.rounds.size(); ++r) {
        CHECK(res.trace.rounds[r].delta_ell == cfg.b);
        CHECK(res.trace.rounds[r].error_proxy == doctest::Approx(1.0).epsilon(1e-10));
    }
    // The partial result is still usable.
    for (double s : res.approx.sigma_hat) CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("adaptive_rsi: power-law spectrum converges with the true ratio below target") {
    DecaySpec spec;
    spec.model = DecaySpec::Model::power_law;
    spec.exponent = 2.0;
    spec.n = 400;
    const DecayMatrix dm = decay_matrix(spec, RngSeed{8});
    AdaptiveConfig cfg = make_cfg(10, 1, 1e-6, 200, 9);
    const AdaptiveResult res = adaptive_rsi(dm.matrix, cfg);
    CHECK(res.trace.status == AdaptiveStatus::converged);
    CHECK(res.trace.final_ell <= 200);
    // Oracle check with the constructed spectrum.
    const int ell = res.trace.final_ell;
    const int p = res.trace.p;
    const double true_ratio =
        std::pow(dm.true_sigma[ell - p] / dm.true_sigma[cfg.k - 1], 2 * cfg.q + 1);
    CHECK(true_ratio <= std::sqrt(cfg.tau));
    // Reported proxy agrees at exit.
    CHECK(res.trace.rounds.back().error_proxy <= std::sqrt(cfg.tau));
    CHECK(res.trace.matvec_count == res.approx.matvec_count);
}

TEST_CASE("adaptive_rsi: each round strictly enlarges the basis span") {
    DecaySpec spec;
    spec.model = DecaySpec::Model::power_law;
    spec.exponent = 1.5;
    spec.n = 120;
    const DecayMatrix dm = decay_matrix(spec, RngSeed{10});
    AdaptiveConfig cfg = make_cfg(6, 1, 1e-4, 100, 11);
    cfg.b = 3;
    const AdaptiveResult res = adaptive_rsi(dm.matrix, cfg);
    CHECK(res.trace.status == AdaptiveStatus::converged);
    // ell strictly increases across rounds.
    for (std::size_t r = 1; r < res.trace.rounds.size(); ++r) {
        CHECK(res.trace.rounds[r].ell > res.trace.rounds[r - 1].ell);
        // No monotonicity theorem backs the proxy, so a reversal is only
        // worth a warning, not a failure.
        WARN(res.trace.rounds[r].error_proxy <= res.trace.rounds[r - 1].error_proxy + 1e-12);
    }
    CHECK(orthonormality_defect(res.approx.q_basis) <= 1e-12);
    if (res.trace.dropped_columns == 0) {
        CHECK(res.trace.matvec_count == long(2 * cfg.q + 2) * res.trace.final_ell);
    }
}

TEST_CASE("adaptive config validation") {
    const Matrix a = Matrix::identity(30);
    AdaptiveConfig cfg = make_cfg(4, 1, 1e-6, 5, 12);  // cmax too small
    CHECK_THROWS_AS(adaptive_rsi(a, cfg), std::invalid_argument);
    cfg = make_cfg(4, 0, 1e-6, 20, 13);  // q must be positive
    CHECK_THROWS_AS(adaptive_rsi(a, cfg), std::invalid_argument);
    cfg = make_cfg(4, 1, 2.0, 20, 14);  // tau outside (0,1)
    CHECK_THROWS_AS(adaptive_rsi(a, cfg), std::invalid_argument);
}
