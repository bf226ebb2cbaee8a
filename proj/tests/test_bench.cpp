#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qlm/bench.hpp"
#include "qlm/core.hpp"

using namespace qlm;
using namespace qlm::bench;

TEST_CASE("uniform-unitsum family normalizes rows") {
    const auto inst = generate_instance("uniform-unitsum", 4, 0, 0.5, 1.0, 9);
    CHECK_NOTHROW(inst.profile.validate());
    CHECK(inst.profile.klass == ValuationClass::unit_sum);
    for (int i = 0; i < 4; ++i) {
        double s = 0;
        for (int j = 0; j < 4; ++j) s += inst.profile.v(i, j);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("ordered family: identical derived rankings") {
    const auto inst = generate_instance("ordered", 4, 0, 0.5, 1.0, 3);
    const OrdinalProfile ord = derive_ordinal(inst.profile);
    for (int i = 1; i < 4; ++i) CHECK(ord.rankings[i] == ord.rankings[0]);
}

TEST_CASE("kws family: block sizes and structure") {
    const auto inst = generate_instance("kws", 16, 2, 0.5, 1.0, 5);
    REQUIRE(inst.partition.has_value());
    CHECK(inst.partition->block_size(0) == 1);
    CHECK(inst.partition->block_size(1) == 2);
    CHECK(inst.partition->block_size(2) == 13);
    CHECK(is_block_consistent(derive_ordinal(inst.profile), *inst.partition));
}

TEST_CASE("adversarial family is seed-independent and block-valued") {
    const auto a = generate_instance("adversarial", 16, 2, 0.5, 1.0, 1);
    const auto b = generate_instance("adversarial", 16, 2, 0.5, 1.0, 2);
    CHECK(a.profile.values == b.profile.values);
    CHECK(a.profile.v(0, 0) == doctest::Approx(1.0));
    CHECK(a.profile.v(5, 1) == doctest::Approx(0.25));  // 16^{-1/2}
    CHECK(a.profile.v(5, 3) == 0.0);
}

TEST_CASE("unknown family rejected") {
    CHECK_THROWS_AS(generate_instance("nope", 4, 1, 0.5, 1.0, 0), std::invalid_argument);
}

TEST_CASE("same seed gives the same instance, different seed differs") {
    const auto a = generate_instance("uniform-unitsum", 8, 0, 0.5, 1.0, 77);
    const auto b = generate_instance("uniform-unitsum", 8, 0, 0.5, 1.0, 77);
    const auto c = generate_instance("uniform-unitsum", 8, 0, 0.5, 1.0, 78);
    CHECK(a.profile.values == b.profile.values);
    CHECK(a.profile.values != c.profile.values);
}

TEST_CASE("run_experiment: tsf sweep respects budget and bound columns") {
    ExperimentConfig cfg;
    cfg.algorithm = "tsf";
    cfg.family = "uniform-unitsum";
    cfg.n = 64;
    cfg.lambda = 1;
    cfg.reps = 20;
    cfg.seed = 11;
    const auto records = run_experiment(cfg);
    REQUIRE(records.size() == 20);
    for (const auto& r : records) {
        CHECK(r.opt_welfare >= r.alg_welfare - kWelfareTol);
        CHECK(r.max_queries <= lambda_tsf_budget(64, 1));
        CHECK(r.bound_satisfied);
        CHECK(r.theorem_bound == doctest::Approx(2.0 * 8.0));
    }
}

TEST_CASE("run_experiment: fpa stays within two queries") {
    ExperimentConfig cfg;
    cfg.algorithm = "fpa";
    cfg.family = "uniform-unitsum";
    cfg.n = 64;
    cfg.reps = 20;
    cfg.seed = 4;
    for (const auto& r : run_experiment(cfg)) {
        CHECK(r.max_queries <= 2);
        CHECK(r.bound_satisfied);
    }
}

TEST_CASE("run_experiment: ordinal-hard family certifies the baseline") {
    ExperimentConfig cfg;
    cfg.algorithm = "ordinal";
    cfg.family = "ordinal-hard";
    cfg.n = 8;
    cfg.reps = 2;
    for (const auto& r : run_experiment(cfg)) {
        CHECK(r.distortion >= 12.0 - kWelfareTol);
        CHECK(r.max_queries == 0);
        CHECK(r.bound_satisfied);  // <= n^2
    }
    cfg.algorithm = "tsf";
    CHECK_THROWS_AS(run_experiment_serial(cfg), std::invalid_argument);
}

TEST_CASE("fmm requires a block-structured family") {
    ExperimentConfig cfg;
    cfg.algorithm = "fmm";
    cfg.family = "uniform-unitsum";
    cfg.n = 16;
    cfg.k = 2;
    cfg.reps = 1;
    CHECK_THROWS_AS(run_experiment_serial(cfg), std::invalid_argument);
    cfg.family = "kws";
    for (const auto& r : run_experiment(cfg)) {
        CHECK(r.max_queries == 2);
        CHECK(r.bound_satisfied);
    }
}

TEST_CASE("csv output is deterministic and parallel matches serial") {
    ExperimentConfig cfg;
    cfg.algorithm = "tsf";
    cfg.family = "kws";
    cfg.n = 32;
    cfg.k = 2;
    cfg.lambda = 2;
    cfg.reps = 12;
    cfg.seed = 2024;
    const std::string a = csv_string(run_experiment(cfg));
    const std::string b = csv_string(run_experiment(cfg));
    const std::string c = csv_string(run_experiment_serial(cfg));
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a.substr(0, a.find('\n')) == std::string(kCsvHeader));
    // runtime_ms column pinned to zero for byte-stable output
    std::istringstream lines(a);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) CHECK(line.substr(line.rfind(',') + 1) == "0");
}

TEST_CASE("config file parsing with overrides") {
    std::istringstream file(
        "# sweep configuration\n"
        "algorithm = fpa\n"
        "family = ordered\n"
        "n = 48\n"
        "reps = 7\n"
        "seed = 123\n");
    ExperimentConfig cfg = load_config(file);
    CHECK(cfg.algorithm == "fpa");
    CHECK(cfg.family == "ordered");
    CHECK(cfg.n == 48);
    CHECK(cfg.reps == 7);
    CHECK(cfg.seed == 123);
    CHECK(apply_config_entry(cfg, "lambda", "3"));
    CHECK(cfg.lambda == 3);
    CHECK_FALSE(apply_config_entry(cfg, "bogus", "1"));

    std::istringstream bad("n 48\n");
    CHECK_THROWS_AS(load_config(bad), std::invalid_argument);
}
