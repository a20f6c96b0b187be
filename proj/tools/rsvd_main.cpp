#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "report.hpp"
#include "rsvd/adaptive.hpp"
#include "rsvd/bounds.hpp"
#include "rsvd/experiments.hpp"
#include "rsvd/io.hpp"
#include "rsvd/normest.hpp"
#include "rsvd/sketch.hpp"
#include "rsvd/testmat.hpp"
#include "rsvd/validate.hpp"

using namespace rsvd;
using rsvd::cli::Json;
using rsvd::cli::emit_report;
using rsvd::cli::make_report;

namespace {

double wall_seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::ofstream open_csv(const std::string& path, const std::string& header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << header << "\n";
    out.precision(17);
    return out;
}

Json audit_to_json(const AuditReport& rep) {
    Json rows = Json::array();
    for (const AuditRow& row : rep.rows) {
        Json r;
        r["claim"] = row.claim;
        r["available"] = row.available;
        r["probabilistic"] = row.probabilistic;
        if (row.available) {
            r["bound"] = row.bound;
            r["actual"] = row.actual;
            r["margin"] = row.margin;
            r["holds"] = row.holds;
        }
        rows.push_back(r);
    }
    Json j;
    j["rows"] = rows;
    j["deterministic_ok"] = rep.deterministic_ok;
    j["probabilistic_ok"] = rep.probabilistic_ok;
    return j;
}

Json approx_to_json(const LowRankApprox& lr) {
    Json j;
    j["sigma_hat"] = lr.sigma_hat;
    j["matvec_count"] = lr.matvec_count;
    j["ell"] = lr.q_basis.cols();
    j["k"] = int(lr.sigma_hat.size());
    return j;
}

void write_factors(const LowRankApprox& lr, const std::string& prefix) {
    write_matrix_binary(lr.q_basis, prefix + ".q.rsim");
    write_matrix_binary(lr.core_u, prefix + ".core_u.rsim");
    write_matrix_binary(lr.v_hat, prefix + ".v.rsim");
    write_spectrum(lr.sigma_hat, prefix + ".sigma.csv");
}

// ---------------------------------------------------------------- gen ----

struct GenOptions {
    std::string out;
    std::string spectrum_out;
    int n = 16;
    int rows = 16, cols = 16;
    int k = 4;
    double mu = 1.0;
    double rho = 1e10;
    std::uint64_t seed = 1;
    std::string model = "exponential";
    double rate = 0.5;
    double exponent = 2.0;
};

void add_gen_command(CLI::App& app, GenOptions& opt, std::string& report_path) {
    CLI::App* gen = app.add_subcommand("gen", "generate a test matrix and write it to a file");
    gen->require_subcommand(1);

    auto finish = [&opt, &report_path](const std::string& family, const Matrix& m,
                                       const std::vector<double>* spectrum) {
        write_matrix(m, opt.out);
        if (spectrum != nullptr && !opt.spectrum_out.empty()) {
            write_spectrum(*spectrum, opt.spectrum_out);
        }
        Json j = make_report("gen");
        j["params"]["family"] = family;
        j["params"]["rows"] = m.rows();
        j["params"]["cols"] = m.cols();
        j["out"] = opt.out;
        if (spectrum != nullptr && !opt.spectrum_out.empty()) j["spectrum_out"] = opt.spectrum_out;
        emit_report(j, report_path);
    };

    CLI::App* id = gen->add_subcommand("identity", "identity matrix");
    id->add_option("--n", opt.n)->required();
    id->add_option("--out", opt.out)->required();
    id->callback([&opt, finish] { finish("identity", Matrix::identity(opt.n), nullptr); });

    CLI::App* ga = gen->add_subcommand("gaussian", "standard Gaussian draw");
    ga->add_option("--rows", opt.rows)->required();
    ga->add_option("--cols", opt.cols)->required();
    ga->add_option("--seed", opt.seed);
    ga->add_option("--out", opt.out)->required();
    ga->callback([&opt, finish] {
        finish("gaussian", gaussian_matrix(opt.rows, opt.cols, RngSeed{opt.seed}), nullptr);
    });

    CLI::App* lkg = gen->add_subcommand("log-kernel-gaussian",
                                        "log-distance kernel of two Gaussian point clouds");
    lkg->add_option("--n", opt.n)->required();
    lkg->add_option("--mu", opt.mu);
    lkg->add_option("--seed", opt.seed);
    lkg->add_option("--out", opt.out)->required();
    lkg->callback([&opt, finish] {
        finish("log-kernel-gaussian", log_kernel_gaussian(opt.n, opt.mu, RngSeed{opt.seed}),
               nullptr);
    });

    CLI::App* lkd = gen->add_subcommand("log-kernel-discs",
                                        "log-distance kernel of two tangent circles");
    lkd->add_option("--n", opt.n)->required();
    lkd->add_option("--out", opt.out)->required();
    lkd->callback([&opt, finish] { finish("log-kernel-discs", log_kernel_discs(opt.n), nullptr); });

    CLI::App* adv = gen->add_subcommand("adversarial", "1-norm estimator trap matrix");
    adv->add_option("--n", opt.n)->required();
    adv->add_option("--rho", opt.rho);
    adv->add_option("--seed", opt.seed);
    adv->add_option("--out", opt.out)->required();
    adv->callback([&opt, finish] {
        finish("adversarial", adversarial_hager(opt.n, opt.rho, RngSeed{opt.seed}), nullptr);
    });

    CLI::App* dec = gen->add_subcommand("decay", "rotation of a prescribed spectrum");
    dec->add_option("--model", opt.model)->check(CLI::IsMember({"exponential", "power-law"}));
    dec->add_option("--rate", opt.rate);
    dec->add_option("--exponent", opt.exponent);
    dec->add_option("--n", opt.n)->required();
    dec->add_option("--seed", opt.seed);
    dec->add_option("--out", opt.out)->required();
    dec->add_option("--spectrum-out", opt.spectrum_out,
                    "also write the exact spectrum, one value per line");
    dec->callback([&opt, finish] {
        DecaySpec spec;
        spec.model = opt.model == "exponential" ? DecaySpec::Model::exponential
                                                : DecaySpec::Model::power_law;
        spec.rate = opt.rate;
        spec.exponent = opt.exponent;
        spec.n = opt.n;
        const DecayMatrix dm = decay_matrix(spec, RngSeed{opt.seed});
        finish("decay", dm.matrix, &dm.true_sigma);
    });

    CLI::App* il = gen->add_subcommand("identical-leading",
                                       "k+1 identical leading singular values, decaying rest");
    il->add_option("--n", opt.n)->required();
    il->add_option("--k", opt.k)->required();
    il->add_option("--out", opt.out)->required();
    il->callback([&opt, finish] {
        finish("identical-leading", identical_leading(opt.n, opt.k), nullptr);
    });
}

// ------------------------------------------------------------- sketch ----

struct SketchOptions {
    std::string in;
    std::string algo = "rsi";
    int k = 1;
    int ell = 0;  // 0: pick 2k+2 or grow under --tol
    int ell1 = 5, ell2 = 0;
    int q = 0;
    int p = -1;
    std::uint64_t seed = 1;
    double delta = 0.05;
    double tol = 0.0;
    int reorth_period = 1;
    bool audit = false;
    bool timing = false;
    std::string out;
    // adaptive
    double tau = 1e-6;
    int b = 2, c = 0, cmax = 0;
};

int run_sketch(const SketchOptions& opt, const std::string& report_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const Matrix a = read_matrix(opt.in);
    const int nmin = std::min(a.rows(), a.cols());

    Json j = make_report("sketch");
    j["params"]["in"] = opt.in;
    j["params"]["algo"] = opt.algo;
    j["params"]["k"] = opt.k;
    j["params"]["q"] = opt.q;
    j["params"]["seed"] = opt.seed;

    LowRankApprox lr;
    bool audit_has_omega = false;
    Matrix omega;

    if (opt.algo == "adaptive") {
        AdaptiveConfig cfg;
        cfg.k = opt.k;
        cfg.q = std::max(1, opt.q);
        cfg.tau = opt.tau;
        cfg.delta = opt.delta;
        cfg.b = opt.b;
        cfg.c = opt.c;
        cfg.cmax = opt.cmax > 0 ? opt.cmax : nmin - 1;
        cfg.seed = RngSeed{opt.seed};
        cfg.reorth_period = opt.reorth_period;
        const AdaptiveResult res = adaptive_rsi(a, cfg);
        lr = res.approx;
        Json rounds = Json::array();
        for (const AdaptiveRound& r : res.trace.rounds) {
            Json jr;
            jr["ell"] = r.ell;
            jr["delta_ell"] = r.delta_ell;
            jr["error_proxy"] = r.error_proxy;
            jr["matvec_count"] = r.matvec_count;
            rounds.push_back(jr);
        }
        j["trace"]["rounds"] = rounds;
        j["trace"]["status"] =
            res.trace.status == AdaptiveStatus::converged ? "converged" : "ceiling_hit";
        j["trace"]["final_ell"] = res.trace.final_ell;
        j["trace"]["p"] = res.trace.p;
        j["params"]["tau"] = opt.tau;
        j["params"]["delta"] = opt.delta;
    } else if (opt.algo == "small-k") {
        const int ell2 = opt.ell2 > 0 ? opt.ell2 : opt.k;
        lr = improved_small_k(a, opt.k, opt.ell1, ell2, opt.q, RngSeed{opt.seed});
        j["params"]["ell1"] = opt.ell1;
        j["params"]["ell2"] = ell2;
    } else if (opt.algo == "basic" || opt.algo == "rsi") {
        SketchConfig cfg;
        cfg.k = opt.k;
        cfg.q = opt.algo == "basic" ? 0 : opt.q;
        cfg.p = opt.p;
        cfg.delta = opt.delta;
        cfg.seed = RngSeed{opt.seed};
        cfg.reorth_period = opt.reorth_period;
        if (opt.tol > 0.0) {
            // Grow ell until the exact relative Frobenius error (it only
            // needs ||A||_F and the computed sigma_hat) meets the tolerance.
            const double afro = fro_norm(a);
            int ell = opt.ell > 0 ? opt.ell : opt.k + 2;
            const int step = std::max(2, opt.k / 4);
            long spent = 0;
            while (true) {
                cfg.ell = ell;
                cfg.seed = RngSeed{opt.seed}.derive(std::uint64_t(ell));
                lr = randomized_subspace_iteration(a, cfg);
                spent += lr.matvec_count;
                double captured = 0.0;
                for (double s : lr.sigma_hat) captured += s * s;
                const double rel =
                    std::sqrt(std::max(0.0, afro * afro - captured)) / afro;
                if (rel <= opt.tol || ell + step >= nmin) break;
                ell += step;
            }
            j["params"]["tol"] = opt.tol;
            j["results"]["total_matvec_across_attempts"] = spent;
        } else {
            cfg.ell = opt.ell > 0 ? opt.ell : std::min(nmin - 1, 2 * opt.k + 2);
            lr = opt.algo == "basic"
                     ? basic_randomized(a, cfg.k, cfg.ell, cfg.seed)
                     : randomized_subspace_iteration(a, cfg);
            omega = gaussian_matrix(a.cols(), cfg.ell, cfg.seed);
            audit_has_omega = true;
        }
        j["params"]["ell"] = lr.q_basis.cols();
    } else {
        throw CLI::ValidationError("--algo must be one of basic|rsi|small-k|adaptive");
    }

    j["results"].update(approx_to_json(lr));
    const ApproxErrors err = approximation_errors(a, lr);
    j["results"]["errors"]["fro"] = err.fro;
    j["results"]["errors"]["two"] = err.two;
    j["results"]["errors"]["rel_fro"] = err.fro / fro_norm(a);

    bool audit_ok = true;
    if (opt.audit) {
        SketchConfig acfg;
        acfg.k = opt.k;
        acfg.ell = lr.q_basis.cols();
        acfg.q = opt.algo == "basic" ? 0 : opt.q;
        acfg.p = opt.p;
        acfg.delta = opt.delta;
        const AuditReport rep =
            bound_audit(a, lr, acfg, audit_has_omega ? &omega : nullptr);
        j["audit"] = audit_to_json(rep);
        audit_ok = rep.deterministic_ok;
    }

    if (!opt.out.empty()) {
        write_factors(lr, opt.out);
        j["out_prefix"] = opt.out;
    }
    if (opt.timing) j["timing"]["wall_seconds"] = wall_seconds_since(t0);
    emit_report(j, report_path);
    return audit_ok ? 0 : 1;
}

// ------------------------------------------------------------- bounds ----

struct BoundsOptions {
    std::string spectrum;
    std::string model;
    double rate = 0.5, exponent = 2.0;
    int n = 0, m = 0;
    int k = 1, ell = 0, p = -1, q = 0;
    double delta = 1e-2;
    double omega2_norm = -1.0, omega1_pinv_norm = -1.0;
    bool show_optimal_ell = false;
};

int run_bounds(const BoundsOptions& opt, const std::string& report_path) {
    SpectrumView spec;
    if (!opt.spectrum.empty()) {
        spec.sigma = read_spectrum(opt.spectrum);
        spec.n = int(spec.sigma.size());
    } else if (!opt.model.empty()) {
        DecaySpec ds;
        ds.model = opt.model == "exponential" ? DecaySpec::Model::exponential
                                              : DecaySpec::Model::power_law;
        ds.rate = opt.rate;
        ds.exponent = opt.exponent;
        ds.n = opt.n;
        spec.sigma = decay_sigma(ds);
        spec.n = opt.n;
    } else {
        throw CLI::ValidationError("bounds needs --spectrum or --model/--n");
    }
    if (opt.n > 0) spec.n = opt.n;
    spec.m = opt.m > 0 ? opt.m : spec.n;
    spec.validate();

    const int ell = opt.ell > 0 ? opt.ell : std::min(spec.n - 1, 2 * opt.k + 2);
    const int p = opt.p >= 0 ? opt.p : default_p(opt.k, ell, opt.delta);

    Json j = make_report("bounds");
    j["params"]["k"] = opt.k;
    j["params"]["ell"] = ell;
    j["params"]["p"] = p;
    j["params"]["p_rule"] = oversampling_p(opt.delta);
    j["params"]["q"] = opt.q;
    j["params"]["delta"] = opt.delta;
    j["params"]["n"] = spec.n;
    j["params"]["m"] = spec.m;

    j["optimum"]["fro"] = spec.tail_fro(opt.k);
    j["optimum"]["two"] = spec.at(opt.k + 1);

    Json avg;
    avg["branch"] = to_string(p_branch_of(p));
    Json sv = Json::array();
    for (int jj = 1; jj <= opt.k; ++jj) sv.push_back(avg_sv_lower(spec, jj, opt.k, ell, p, opt.q));
    avg["sv_lower"] = sv;
    const NormPair ap = avg_lowrank_upper(spec, opt.k, ell, p, opt.q);
    avg["fro_upper"] = ap.fro;
    avg["two_upper"] = ap.two;
    j["average"] = avg;

    const BoundReport dev = deviation_bounds(spec, opt.k, ell, p, opt.q, opt.delta);
    Json jd;
    jd["c_delta"] = dev.constants.c_delta;
    jd["sv_lower"] = dev.sv_lower;
    jd["fro_upper"] = dev.fro_upper;
    jd["two_upper"] = dev.two_upper;
    jd["sv_floor"] = dev.sv_floor;
    jd["two_upper_qfree"] = dev.two_upper_qfree;
    j["deviation"] = jd;
    j["constants"]["c1"] = dev.constants.c1;
    j["constants"]["c2"] = dev.constants.c2;
    j["constants"]["c"] = dev.constants.c;
    j["constants"]["tau"] = dev.constants.tau;

    if (ell - opt.k >= 4) j["hmt"]["two_upper"] = hmt_bound(spec, opt.k, ell - opt.k);

    if (opt.omega2_norm >= 0.0 && opt.omega1_pinv_norm >= 0.0) {
        Json det;
        Json dsv = Json::array();
        for (int jj = 1; jj <= opt.k; ++jj) {
            dsv.push_back(det_sv_lower(spec, jj, ell, p, opt.q, opt.omega2_norm,
                                       opt.omega1_pinv_norm));
        }
        det["sv_lower"] = dsv;
        const NormPair dp =
            det_lowrank_upper(spec, opt.k, ell, p, opt.q, opt.omega2_norm, opt.omega1_pinv_norm);
        det["fro_upper"] = dp.fro;
        det["two_upper"] = dp.two;
        j["deterministic"] = det;
    }

    if (opt.show_optimal_ell) {
        try {
            const OptimalEll oe = optimal_ell(opt.k, p, 1.0);
            j["optimal_ell"]["ell_opt"] = oe.ell_opt;
            j["optimal_ell"]["ell_int"] = oe.ell_int;
            j["optimal_ell"]["bracket"] = {oe.bracket_lo, oe.bracket_hi};
        } catch (const BracketSignError& e) {
            j["optimal_ell"]["error"] = e.what();
        }
    }

    emit_report(j, report_path);
    return 0;
}

// ------------------------------------------------------- estimate-norm ----

struct EstimateOptions {
    std::string in;
    bool one = false, two = false;
    int ell = 5;
    int q = 10;
    int hager_iters = 2;
    std::uint64_t seed = 1;
    std::string start = "randomized";
};

int run_estimate(const EstimateOptions& opt, const std::string& report_path) {
    const Matrix a = read_matrix(opt.in);
    Json j = make_report("estimate-norm");
    j["params"]["in"] = opt.in;
    j["params"]["ell"] = opt.ell;
    j["params"]["seed"] = opt.seed;

    if (!opt.one && !opt.two) {
        throw CLI::ValidationError("estimate-norm needs --one and/or --two");
    }
    if (opt.one) {
        NormEstimate est;
        if (opt.start == "ones") {
            est = hager_one_norm(matrix_operator(a),
                                 std::vector<double>(a.cols(), 1.0 / a.cols()), 5);
            est.start_vector_tag = StartVectorTag::ones;
        } else {
            est = randomized_hager(a, opt.ell, RngSeed{opt.seed}, opt.hager_iters);
        }
        j["one"]["value"] = est.value;
        j["one"]["iterations"] = est.iterations;
        j["one"]["matvec_count"] = est.matvec_count;
        j["one"]["start"] = opt.start;
    }
    if (opt.two) {
        const PowerEstimate est = randomized_power_method(a, opt.q, RngSeed{opt.seed});
        j["two"]["value"] = est.norm_estimate;
        j["two"]["matvec_count"] = est.matvec_count;
        j["two"]["q"] = opt.q;
    }
    emit_report(j, report_path);
    return 0;
}

// ---------------------------------------------------------- experiment ----

struct ExperimentOptions {
    std::string out_prefix;
    int n = 500;
    int k = 50;
    int seeds = 20;
    double mu = 1.0;
    double tol = 1e-8;
    double rho = 1e10;
    int ell = 20;
    int p = 4;
    int q = 1;
    double delta = 0.1;
    double rate = 0.85;
    int trials = 10000;
    std::uint64_t seed = 1;
    std::vector<double> tols{1e-6, 1e-8, 1e-10};
    std::vector<int> qs{0, 2, 4};
    std::vector<int> ps{0, 1, 4};
    std::vector<double> ts{1.5, 2.0, 4.0};
    std::vector<double> us{1.0, 2.0, 3.0};
};

int run_power_compare(const ExperimentOptions& opt, const std::string& report_path) {
    const PowerCompareResult res = power_compare_experiment(
        opt.n, opt.mu, opt.seeds, opt.tol, 4000, RngSeed{opt.seed}, RngSeed{opt.seed + 1});
    if (!opt.out_prefix.empty()) {
        auto csv = open_csv(opt.out_prefix + "_curves.csv", "seed,method,matvec,rel_two_error");
        for (std::size_t s = 0; s < res.runs.size(); ++s) {
            for (const NormCurvePoint& pt : res.runs[s].improved_curve) {
                csv << s << ",improved," << pt.matvec << "," << pt.rel_error << "\n";
            }
            for (const NormCurvePoint& pt : res.runs[s].plain_curve) {
                csv << s << ",plain," << pt.matvec << "," << pt.rel_error << "\n";
            }
        }
    }
    Json j = make_report("experiment/power-compare");
    j["params"]["n"] = opt.n;
    j["params"]["mu"] = opt.mu;
    j["params"]["seeds"] = opt.seeds;
    j["params"]["tol"] = opt.tol;
    j["results"]["sigma1"] = res.sigma1;
    j["results"]["median_improved_matvecs"] = res.median_improved;
    j["results"]["median_improved_total_matvecs"] = res.median_improved_total;
    j["results"]["median_plain_matvecs"] = res.median_plain;
    j["results"]["improved_no_worse"] = res.improved_no_worse;
    emit_report(j, report_path);
    return res.improved_no_worse ? 0 : 1;
}

int run_matvec_table(const ExperimentOptions& opt, const std::string& report_path) {
    const MatvecTableResult res =
        matvec_table_experiment(opt.n, opt.k, opt.tols, opt.qs, 5, RngSeed{opt.seed});
    if (!opt.out_prefix.empty()) {
        auto csv = open_csv(opt.out_prefix + "_table.csv",
                            "tol,q,ell,blocks,block_size,total,achieved,converged");
        for (const MatvecTableEntry& e : res.entries) {
            csv << e.tol << "," << e.q << "," << e.ell << "," << e.blocks << "," << e.ell << ","
                << e.total << "," << e.achieved << "," << (e.converged ? 1 : 0) << "\n";
        }
    }
    Json j = make_report("experiment/matvec-table");
    j["params"]["n"] = opt.n;
    j["params"]["k"] = opt.k;
    Json rows = Json::array();
    for (const MatvecTableEntry& e : res.entries) {
        Json r;
        r["tol"] = e.tol;
        r["q"] = e.q;
        r["ell"] = e.ell;
        r["blocks"] = e.blocks;
        r["block_size"] = e.ell;
        r["total"] = e.total;
        r["achieved"] = e.achieved;
        r["converged"] = e.converged;
        rows.push_back(r);
    }
    j["results"]["table"] = rows;
    j["results"]["q_zero_strictly_smallest"] = res.q_zero_strictly_smallest;
    emit_report(j, report_path);
    return res.q_zero_strictly_smallest ? 0 : 1;
}

int run_hager_adversarial(const ExperimentOptions& opt, const std::string& report_path) {
    const HagerAdversarialResult res =
        hager_adversarial_experiment(opt.n, opt.rho, 5, opt.seeds, RngSeed{opt.seed});
    if (!opt.out_prefix.empty()) {
        auto csv = open_csv(opt.out_prefix + "_runs.csv",
                            "seed,truth,plain,randomized,plain_ratio,rand_ratio");
        for (std::size_t s = 0; s < res.runs.size(); ++s) {
            const HagerAdversarialRun& r = res.runs[s];
            csv << s << "," << r.truth << "," << r.plain << "," << r.randomized << ","
                << r.plain / r.truth << "," << r.randomized / r.truth << "\n";
        }
    }
    Json j = make_report("experiment/hager-adversarial");
    j["params"]["n"] = opt.n;
    j["params"]["rho"] = opt.rho;
    j["params"]["seeds"] = opt.seeds;
    j["results"]["worst_plain_ratio"] = res.worst_plain_ratio;
    j["results"]["worst_randomized_ratio"] = res.worst_rand_ratio;
    j["results"]["plain_blind"] = res.plain_blind;
    j["results"]["randomized_within_10"] = res.randomized_within_10;
    emit_report(j, report_path);
    return res.plain_blind && res.randomized_within_10 ? 0 : 1;
}

int run_tail_mc(const ExperimentOptions& opt, const std::string& report_path) {
    Json j = make_report("experiment/tail-mc");
    j["params"]["ell"] = opt.ell;
    j["params"]["trials"] = opt.trials;
    bool all_ok = true;

    Json tails = Json::array();
    std::ofstream tail_csv;
    if (!opt.out_prefix.empty()) {
        tail_csv = open_csv(opt.out_prefix + "_tail.csv", "p,t,bound,empirical,pass");
    }
    for (int p : opt.ps) {
        const auto rows = tail_bound_mc(opt.ell, p, opt.ts, opt.trials, RngSeed{opt.seed});
        for (const TailBoundRow& row : rows) {
            const bool ok = row.empirical <= row.bound + binomial_slack(row.bound, opt.trials);
            all_ok = all_ok && ok;
            Json r;
            r["p"] = p;
            r["t"] = row.t;
            r["bound"] = row.bound;
            r["empirical"] = row.empirical;
            r["pass"] = ok;
            tails.push_back(r);
            if (tail_csv.is_open()) {
                tail_csv << p << "," << row.t << "," << row.bound << "," << row.empirical << ","
                         << (ok ? 1 : 0) << "\n";
            }
        }
    }
    j["results"]["tail"] = tails;

    const auto conc = concentration_mc(60, 40, opt.trials, opt.us, RngSeed{opt.seed + 1});
    Json cj = Json::array();
    std::ofstream conc_csv;
    if (!opt.out_prefix.empty()) {
        conc_csv = open_csv(opt.out_prefix + "_concentration.csv", "u,bound,empirical,pass");
    }
    for (const ConcentrationRow& row : conc.rows) {
        const bool ok = row.empirical <= row.bound + binomial_slack(row.bound, opt.trials);
        all_ok = all_ok && ok;
        Json r;
        r["u"] = row.u;
        r["bound"] = row.bound;
        r["empirical"] = row.empirical;
        r["pass"] = ok;
        cj.push_back(r);
        if (conc_csv.is_open()) {
            conc_csv << row.u << "," << row.bound << "," << row.empirical << "," << (ok ? 1 : 0)
                     << "\n";
        }
    }
    j["results"]["concentration"] = cj;
    j["results"]["mean_two_norm"] = conc.mean_two_norm;
    j["results"]["expectation_bound"] = conc.expectation_bound;
    j["results"]["mean_below_expectation_bound"] = conc.mean_two_norm <= conc.expectation_bound;
    all_ok = all_ok && conc.mean_two_norm <= conc.expectation_bound;
    emit_report(j, report_path);
    return all_ok ? 0 : 1;
}

int run_deviation_mc(const ExperimentOptions& opt, const std::string& report_path) {
    const DeviationMcResult res =
        deviation_mc_experiment(64, 4, 12, opt.p, opt.q, opt.delta, opt.rate, opt.seeds,
                                RngSeed{opt.seed}, RngSeed{opt.seed + 1});
    if (!opt.out_prefix.empty()) {
        auto csv = open_csv(opt.out_prefix + "_runs.csv",
                            "seed,err_fro,bound_fro,err_two,bound_two,sv_ok,fro_ok,two_ok");
        for (std::size_t s = 0; s < res.runs.size(); ++s) {
            const DeviationMcRun& r = res.runs[s];
            csv << s << "," << r.err_fro << "," << r.bound_fro << "," << r.err_two << ","
                << r.bound_two << "," << r.sv_ok << "," << r.fro_ok << "," << r.two_ok << "\n";
        }
    }
    Json j = make_report("experiment/deviation-mc");
    j["params"]["p"] = opt.p;
    j["params"]["q"] = opt.q;
    j["params"]["delta"] = opt.delta;
    j["params"]["seeds"] = opt.seeds;
    j["results"]["violations"] = res.violations;
    j["results"]["rate"] = res.rate;
    j["results"]["threshold"] = res.threshold;
    j["results"]["pass"] = res.pass;
    emit_report(j, report_path);
    return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randomized subspace iteration laboratory"};
    app.require_subcommand(1);
    std::string report_path;
    app.add_option("--report", report_path, "write the JSON report here instead of stdout")
        ->configurable(false);

    GenOptions gen_opt;
    add_gen_command(app, gen_opt, report_path);

    SketchOptions sk;
    CLI::App* sketch = app.add_subcommand("sketch", "low-rank sketch of a matrix file");
    sketch->add_option("--in", sk.in)->required();
    sketch->add_option("--algo", sk.algo)
        ->check(CLI::IsMember({"basic", "rsi", "small-k", "adaptive"}));
    sketch->add_option("--k", sk.k)->required();
    sketch->add_option("--ell", sk.ell);
    sketch->add_option("--ell1", sk.ell1);
    sketch->add_option("--ell2", sk.ell2);
    sketch->add_option("--q", sk.q);
    sketch->add_option("--p", sk.p);
    sketch->add_option("--seed", sk.seed);
    sketch->add_option("--delta", sk.delta);
    sketch->add_option("--tol", sk.tol, "grow ell until this relative Frobenius error");
    sketch->add_option("--reorth-period", sk.reorth_period);
    sketch->add_option("--tau", sk.tau);
    sketch->add_option("--b", sk.b);
    sketch->add_option("--c", sk.c);
    sketch->add_option("--cmax", sk.cmax);
    sketch->add_flag("--audit", sk.audit, "run the bound audit on the result");
    sketch->add_flag("--timing", sk.timing, "include wall time in the report");
    sketch->add_option("--out", sk.out, "prefix for the factor files");

    EstimateOptions es;
    CLI::App* est = app.add_subcommand("estimate-norm", "1-norm and 2-norm estimation");
    est->add_option("--in", es.in)->required();
    est->add_flag("--one", es.one);
    est->add_flag("--two", es.two);
    est->add_option("--ell", es.ell);
    est->add_option("--q", es.q);
    est->add_option("--hager-iters", es.hager_iters);
    est->add_option("--seed", es.seed);
    est->add_option("--start", es.start)->check(CLI::IsMember({"randomized", "ones"}));

    BoundsOptions bo;
    CLI::App* bounds = app.add_subcommand("bounds", "evaluate error bounds on a spectrum");
    bounds->add_option("--spectrum", bo.spectrum);
    bounds->add_option("--model", bo.model)->check(CLI::IsMember({"exponential", "power-law"}));
    bounds->add_option("--rate", bo.rate);
    bounds->add_option("--exponent", bo.exponent);
    bounds->add_option("--n", bo.n);
    bounds->add_option("--m", bo.m);
    bounds->add_option("--k", bo.k)->required();
    bounds->add_option("--ell", bo.ell);
    bounds->add_option("--p", bo.p);
    bounds->add_option("--q", bo.q);
    bounds->add_option("--delta", bo.delta);
    bounds->add_option("--omega2-norm", bo.omega2_norm);
    bounds->add_option("--omega1-pinv-norm", bo.omega1_pinv_norm);
    bounds->add_flag("--optimal-ell", bo.show_optimal_ell);

    ExperimentOptions ex;
    CLI::App* exp = app.add_subcommand("experiment", "desk-scale experiment harness");
    exp->require_subcommand(1);
    CLI::App* pc = exp->add_subcommand("power-compare");
    pc->add_option("--n", ex.n);
    pc->add_option("--mu", ex.mu);
    pc->add_option("--seeds", ex.seeds);
    pc->add_option("--tol", ex.tol);
    pc->add_option("--seed", ex.seed);
    pc->add_option("--out-prefix", ex.out_prefix);
    CLI::App* mt = exp->add_subcommand("matvec-table");
    mt->add_option("--n", ex.n);
    mt->add_option("--k", ex.k);
    mt->add_option("--tols", ex.tols);
    mt->add_option("--qs", ex.qs);
    mt->add_option("--seed", ex.seed);
    mt->add_option("--out-prefix", ex.out_prefix);
    CLI::App* ha = exp->add_subcommand("hager-adversarial");
    ha->add_option("--n", ex.n)->default_val(100);
    ha->add_option("--rho", ex.rho);
    ha->add_option("--seeds", ex.seeds);
    ha->add_option("--seed", ex.seed);
    ha->add_option("--out-prefix", ex.out_prefix);
    CLI::App* tm = exp->add_subcommand("tail-mc");
    tm->add_option("--ell", ex.ell);
    tm->add_option("--ps", ex.ps);
    tm->add_option("--ts", ex.ts);
    tm->add_option("--us", ex.us);
    tm->add_option("--trials", ex.trials);
    tm->add_option("--seed", ex.seed);
    tm->add_option("--out-prefix", ex.out_prefix);
    CLI::App* dm = exp->add_subcommand("deviation-mc");
    dm->add_option("--p", ex.p);
    dm->add_option("--q", ex.q);
    dm->add_option("--delta", ex.delta);
    dm->add_option("--rate", ex.rate);
    dm->add_option("--seeds", ex.seeds)->default_val(500);
    dm->add_option("--seed", ex.seed);
    dm->add_option("--out-prefix", ex.out_prefix);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sketch->parsed()) return run_sketch(sk, report_path);
        if (est->parsed()) return run_estimate(es, report_path);
        if (bounds->parsed()) return run_bounds(bo, report_path);
        if (exp->parsed()) {
            if (pc->parsed()) return run_power_compare(ex, report_path);
            if (mt->parsed()) return run_matvec_table(ex, report_path);
            if (ha->parsed()) return run_hager_adversarial(ex, report_path);
            if (tm->parsed()) return run_tail_mc(ex, report_path);
            if (dm->parsed()) return run_deviation_mc(ex, report_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
