// Command-line harness: instance generation, experiment sweeps, lower-bound
// certification, and a quick invariant check battery.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qlm/adversary.hpp"
#include "qlm/algorithms.hpp"
#include "qlm/bench.hpp"
#include "qlm/core.hpp"
#include "qlm/graphmax.hpp"
#include "qlm/rng.hpp"
#include "qlm/solvers.hpp"

using namespace qlm;

namespace {

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    return file;
}

int cmd_gen(const bench::ExperimentConfig& cfg) {
    const auto inst = bench::generate_instance(cfg.family, cfg.n, cfg.k, cfg.eps, cfg.tail, cfg.seed);
    std::ofstream file;
    std::ostream& os = open_out(file, cfg.out);
    write_instance(os, inst.profile);
    return 0;
}

int cmd_run(const bench::ExperimentConfig& cfg, bool serial) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto records = serial ? bench::run_experiment_serial(cfg) : bench::run_experiment(cfg);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ofstream file;
    std::ostream& os = open_out(file, cfg.out);
    bench::write_csv(os, records);
    int violations = 0;
    for (const auto& r : records) violations += r.bound_satisfied ? 0 : 1;
    std::cerr << records.size() << " runs in " << ms << " ms, " << violations
              << " theorem-bound violations\n";
    return violations == 0 ? 0 : 2;
}

void export_profile(const std::string& path, const ValuationProfile& profile) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open profile output file: " + path);
    write_instance(f, profile);
}

int cmd_certify(const std::string& construction, const bench::ExperimentConfig& cfg,
                const std::string& klass_str, const std::string& against,
                const std::string& profile_out) {
    std::ofstream file;
    std::ostream& os = open_out(file, cfg.out);
    if (construction == "ordinal") {
        const OrdinalAdversaryResult r = ordinal_adversary_certify(
            [](const OrdinalProfile& ord, QueryOracle&) { return ordinal_baseline(ord); }, cfg.n);
        os << "ordinal-adversary n=" << cfg.n << " alg_welfare=" << r.alg_welfare
           << " opt_welfare=" << r.opt_welfare << " ratio=" << r.ratio << '\n';
        export_profile(profile_out, r.profile);
        return 0;
    }
    if (construction == "tsf-block") {
        const TsfAdversaryResult r = tsf_adversary_certify(cfg.n, cfg.k, cfg.eps);
        os << "tsf-adversary n=" << cfg.n << " k=" << cfg.k << " eps=" << r.eps << " xi=" << r.xi
           << " alg_welfare=" << r.alg_welfare << " (closed form " << r.closed_form_alg << ")"
           << " witness=" << r.witness_welfare << " (target " << r.closed_form_witness << ")"
           << " ratio=" << r.ratio << '\n';
        export_profile(profile_out, r.profile);
        return r.witness_welfare + kWelfareTol >= r.closed_form_witness ? 0 : 2;
    }
    if (construction == "adaptive") {
        const ValuationClass klass = valuation_class_from_string(klass_str);
        const LowerBoundFamily fam = LowerBoundFamily::make(cfg.n, cfg.k, klass, cfg.eps, cfg.xi);
        AdaptiveAdversaryOracle oracle(fam);
        const OrdinalProfile ord = identity_ordinal(cfg.n);
        Matching out;
        if (against == "tsf") {
            out = lambda_tsf(ord, oracle, max_lambda_for_budget(cfg.n, cfg.k));
        } else if (against == "fpa") {
            if (cfg.k < 2) throw std::invalid_argument("fpa makes 2 queries; need k >= 2");
            out = fpa(ord, oracle);
        } else if (against == "strawman") {
            out = random_query_strawman(ord, oracle, cfg.k, cfg.seed);
        } else {
            throw std::invalid_argument("unknown --against: " + against);
        }
        const FinalizeResult r = finalize_profile(fam, oracle, out);
        os << "adaptive n=" << cfg.n << " k=" << cfg.k << " class=" << to_string(klass)
           << " against=" << against << " r=" << r.chosen_r << " alg_welfare=" << r.alg_welfare
           << " (expected " << r.expected_alg << ", exact=" << (r.exact_alg_welfare ? "yes" : "no")
           << ") witness=" << r.witness_welfare << " ratio=" << r.ratio << " (bound "
           << r.ratio_bound << ")\n";
        export_profile(profile_out, r.profile);
        return r.ratio + kWelfareTol >= r.ratio_bound ? 0 : 2;
    }
    throw std::invalid_argument("unknown construction: " + construction);
}

#define CHECK_LINE(name, cond)                                        \
    do {                                                              \
        const bool ok_ = (cond);                                      \
        std::cout << (ok_ ? "PASS " : "FAIL ") << name << '\n';       \
        failures += ok_ ? 0 : 1;                                      \
    } while (0)

int cmd_verify() {
    int failures = 0;

    {  // solver oracle agreement on small random instances
        bool ok = true;
        for (int n = 2; n <= 6 && ok; ++n)
            for (int rep = 0; rep < 20 && ok; ++rep) {
                auto rng = make_rng(7, n * 100 + rep);
                WeightMatrix w(n);
                for (double& x : w.w) x = uniform01(rng);
                const Matching hm = hungarian_max_weight(w);
                const Matching bm = brute_force_opt(w);
                double hw = 0, bw = 0;
                for (int i = 0; i < n; ++i) {
                    hw += w.at(i, hm.assignment[i]);
                    bw += w.at(i, bm.assignment[i]);
                }
                ok = std::fabs(hw - bw) <= kWelfareTol;
            }
        CHECK_LINE("hungarian == brute force (n<=6)", ok);
    }
    {  // budgets and domination on random unit-sum instances
        bool budgets = true, dominated = true;
        for (int rep = 0; rep < 10; ++rep) {
            const auto inst = bench::generate_instance("uniform-unitsum", 32, 2, 0.5, 1.0, 100 + rep);
            const OrdinalProfile ord = derive_ordinal(inst.profile);
            for (int lambda = 0; lambda <= 2; ++lambda) {
                TruthfulOracle oracle(inst.profile);
                SimulatedProfile sim;
                lambda_tsf(ord, oracle, lambda, &sim);
                budgets = budgets && oracle.max_count() <= lambda_tsf_budget(32, lambda);
                dominated = dominated && sim.dominated_by(inst.profile);
            }
            TruthfulOracle oracle(inst.profile);
            fpa(ord, oracle);
            budgets = budgets && oracle.max_count() <= 2;
        }
        CHECK_LINE("query budgets (tsf, fpa)", budgets);
        CHECK_LINE("simulated values dominated by truth", dominated);
    }
    {  // ordinal baseline on the paired-ranking family
        const OrdinalAdversaryResult r = ordinal_adversary_certify(
            [](const OrdinalProfile& ord, QueryOracle&) { return ordinal_baseline(ord); }, 8);
        CHECK_LINE("ordinal adversary n=8: welfare 1/8 and ratio >= 12",
                   std::fabs(r.alg_welfare - 0.125) <= kWelfareTol && r.ratio >= 12.0 - kWelfareTol);
    }
    {  // adaptive adversary consistency
        bool ok = true;
        for (const auto klass : {ValuationClass::unrestricted, ValuationClass::unit_sum}) {
            const LowerBoundFamily fam = LowerBoundFamily::make(64, 2, klass, 0.25, 0.25);
            AdaptiveAdversaryOracle oracle(fam);
            const OrdinalProfile ord = identity_ordinal(64);
            const Matching out = lambda_tsf(ord, oracle, 0);
            const FinalizeResult r = finalize_profile(fam, oracle, out);
            ok = ok && r.ratio + kWelfareTol >= r.ratio_bound && r.exact_alg_welfare;
        }
        CHECK_LINE("lower-bound adversary (k=2, n=64) ratio and consistency", ok);
    }
    {  // determinism
        bench::ExperimentConfig cfg;
        cfg.algorithm = "tsf";
        cfg.family = "uniform-unitsum";
        cfg.n = 24;
        cfg.lambda = 1;
        cfg.reps = 8;
        cfg.seed = 42;
        CHECK_LINE("identical seed => identical csv",
                   bench::csv_string(bench::run_experiment(cfg)) ==
                       bench::csv_string(bench::run_experiment_serial(cfg)));
    }
    std::cout << (failures == 0 ? "verify: all checks passed\n"
                                : "verify: " + std::to_string(failures) + " checks failed\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"query-limited one-sided matching benchmark harness"};
    app.require_subcommand(1);

    bench::ExperimentConfig cfg;
    std::string config_path, construction = "ordinal", klass = "unrestricted", against = "tsf";
    std::string profile_out;
    bool serial = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key = value config file; flags override");
        sub->add_option("--family", cfg.family);
        sub->add_option("--algorithm", cfg.algorithm);
        sub->add_option("--n", cfg.n);
        sub->add_option("--k", cfg.k);
        sub->add_option("--lambda", cfg.lambda);
        sub->add_option("--eps", cfg.eps);
        sub->add_option("--xi", cfg.xi);
        sub->add_option("--tail", cfg.tail);
        sub->add_option("--reps", cfg.reps);
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--out", cfg.out);
        sub->add_option("--threads", cfg.threads);
    };

    CLI::App* gen = app.add_subcommand("gen", "generate an instance file");
    add_common(gen);
    CLI::App* run = app.add_subcommand("run", "run an experiment sweep, emit CSV");
    add_common(run);
    run->add_flag("--serial", serial, "use the serial reference runner");
    CLI::App* certify = app.add_subcommand("certify", "adversarial lower-bound certification");
    add_common(certify);
    certify->add_option("--construction", construction, "ordinal | tsf-block | adaptive");
    certify->add_option("--class", klass, "unrestricted | unit-sum (lower only)");
    certify->add_option("--against", against, "tsf | fpa | strawman (lower only)");
    certify->add_option("--profile-out", profile_out, "write the finalized profile for replay");
    CLI::App* verify = app.add_subcommand("verify", "run the invariant check battery");
    (void)verify;

    CLI11_PARSE(app, argc, argv);

    try {
        // Config file first, then re-parse flags so they win.
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::runtime_error("cannot open config: " + config_path);
            bench::ExperimentConfig from_file = bench::load_config(f);
            std::swap(cfg, from_file);
            app.clear();
            CLI11_PARSE(app, argc, argv);
        }
        if (app.got_subcommand("gen")) return cmd_gen(cfg);
        if (app.got_subcommand("run")) return cmd_run(cfg, serial);
        if (app.got_subcommand("certify"))
            return cmd_certify(construction, cfg, klass, against, profile_out);
        if (app.got_subcommand("verify")) return cmd_verify();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
