#include <doctest.h>

#include <cstdlib>

#include "rsvd/experiments.hpp"
#include "test_util.hpp"

using namespace rsvd;

TEST_CASE("power_compare_experiment: small instance, two-stage never behind") {
    const PowerCompareResult res =
        power_compare_experiment(80, 1.0, 8, 1e-6, 2000, RngSeed{1}, RngSeed{2});
    CHECK(res.runs.size() == 8);
    for (const PowerCompareRun& run : res.runs) {
        CHECK(run.improved_converged);
        CHECK(run.plain_converged);
        CHECK(run.improved_startup == 10);
        CHECK(!run.improved_curve.empty());
    }
    CHECK(res.median_improved <= res.median_plain);
}

TEST_CASE("matvec_table_experiment: q = 0 wins on a fast-decaying kernel") {
    const MatvecTableResult res =
        matvec_table_experiment(120, 12, {1e-6, 1e-8}, {0, 2}, 4, RngSeed{3});
    CHECK(res.entries.size() == 4);
    for (const MatvecTableEntry& e : res.entries) CHECK(e.converged);
    CHECK(res.q_zero_strictly_smallest);
}

TEST_CASE("hager_adversarial_experiment: blind plain runs, seeing randomized runs") {
    const HagerAdversarialResult res = hager_adversarial_experiment(60, 1e8, 5, 5, RngSeed{4});
    CHECK(res.plain_blind);
    CHECK(res.randomized_within_10);
}

TEST_CASE("deviation_mc_experiment: certificates hold on every run") {
    const DeviationMcResult res =
        deviation_mc_experiment(32, 3, 9, 2, 1, 0.1, 0.8, 120, RngSeed{5}, RngSeed{6});
    CHECK(res.pass);
    for (const DeviationMcRun& run : res.runs) {
        CHECK(run.rey_two_ok);
        CHECK(run.rey_sv_ok);
        CHECK(run.hw_ok);
    }
}

TEST_CASE("deviation_mc_experiment: schedule-independent under trial threads") {
    const DeviationMcResult serial =
        deviation_mc_experiment(24, 2, 6, 1, 1, 0.2, 0.7, 60, RngSeed{7}, RngSeed{8});
    setenv("RSVD_LAB_THREADS", "3", 1);
    const DeviationMcResult threaded =
        deviation_mc_experiment(24, 2, 6, 1, 1, 0.2, 0.7, 60, RngSeed{7}, RngSeed{8});
    unsetenv("RSVD_LAB_THREADS");
    CHECK(serial.violations == threaded.violations);
    REQUIRE(serial.runs.size() == threaded.runs.size());
    for (std::size_t i = 0; i < serial.runs.size(); ++i) {
        CHECK(serial.runs[i].err_fro == threaded.runs[i].err_fro);
        CHECK(serial.runs[i].err_two == threaded.runs[i].err_two);
    }
}
