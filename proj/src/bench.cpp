#include "qlm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qlm/adversary.hpp"
#include "qlm/rng.hpp"
#include "qlm/solvers.hpp"

namespace qlm::bench {

namespace {

ValuationProfile unit_sum_rows(int n, double tail, std::mt19937_64& rng) {
    ValuationProfile p(n, ValuationClass::unit_sum);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double x = std::pow(exponential(rng), tail);
            p.v(i, j) = x;
            sum += x;
        }
        for (int j = 0; j < n; ++j) p.v(i, j) /= sum;
    }
    return p;
}

}  // namespace

GeneratedInstance generate_instance(const std::string& family, int n, int k, double eps,
                                    double tail, std::uint64_t seed) {
    auto rng = make_rng(seed);
    if (family == "uniform-unitsum") {
        return {unit_sum_rows(n, tail, rng), std::nullopt};
    }
    if (family == "ordered") {
        // Common ranking 0,1,...,n-1: sort each row descending.
        ValuationProfile p = unit_sum_rows(n, tail, rng);
        for (int i = 0; i < n; ++i)
            std::sort(&p.v(i, 0), &p.v(i, 0) + n, std::greater<>());
        return {std::move(p), std::nullopt};
    }
    if (family == "kws") {
        // Sorted row values split block-wise; each agent shuffles the items
        // within a block, so rankings agree on blocks but not inside them.
        const KwsPartition part = KwsPartition::make(n, k, eps);
        ValuationProfile p = unit_sum_rows(n, tail, rng);
        for (int i = 0; i < n; ++i) {
            std::vector<double> row(&p.v(i, 0), &p.v(i, 0) + n);
            std::sort(row.begin(), row.end(), std::greater<>());
            int pos = 0;
            for (const auto& block : part.blocks) {
                std::vector<int> items = block;
                for (std::size_t t = items.size(); t > 1; --t)
                    std::swap(items[t - 1], items[uniform_int(rng, 0, static_cast<int>(t) - 1)]);
                for (int item : items) p.v(i, item) = row[pos++];
            }
        }
        return {std::move(p), part};
    }
    if (family == "adversarial") {
        // Static hard k-WS instance: geometric block values, identical agents.
        const KwsPartition part = KwsPartition::make(n, k, eps);
        ValuationProfile p(n, ValuationClass::unrestricted);
        for (std::size_t b = 0; b < part.blocks.size(); ++b) {
            const double val =
                b + 1 <= static_cast<std::size_t>(k)
                    ? std::pow(static_cast<double>(n), -static_cast<double>(b) / k)
                    : 0.0;
            for (int j : part.blocks[b])
                for (int i = 0; i < n; ++i) p.v(i, j) = val;
        }
        return {std::move(p), part};
    }
    throw std::invalid_argument("generate_instance: unknown family " + family);
}

RunRecord run_one(const ExperimentConfig& cfg, int rep) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t rep_seed = splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(rep)));

    RunRecord rec;
    rec.family = cfg.family;
    rec.n = cfg.n;
    rec.algorithm = cfg.algorithm;
    rec.seed = rep_seed;

    if (cfg.family == "ordinal-hard") {
        if (cfg.algorithm != "ordinal")
            throw std::invalid_argument("run_one: the ordinal-hard family drives the ordinal baseline only");
        const OrdinalAdversaryResult r = ordinal_adversary_certify(
            [](const OrdinalProfile& ord, QueryOracle&) { return ordinal_baseline(ord); }, cfg.n);
        rec.opt_welfare = r.opt_welfare;
        rec.alg_welfare = r.alg_welfare;
        rec.distortion = r.ratio;
        rec.max_queries = 0;
        rec.theorem_bound = static_cast<double>(cfg.n) * cfg.n;
        rec.bound_satisfied = rec.distortion <= rec.theorem_bound + kWelfareTol;
        rec.runtime_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                               std::chrono::steady_clock::now() - t0)
                                               .count());
        return rec;
    }

    GeneratedInstance inst = generate_instance(cfg.family, cfg.n, cfg.k, cfg.eps, cfg.tail, rep_seed);
    const OrdinalProfile ord = derive_ordinal(inst.profile);
    const Matching opt = hungarian_max_weight(WeightMatrix::from(inst.profile));
    rec.opt_welfare = social_welfare(opt, inst.profile);

    TruthfulOracle oracle(inst.profile);
    Matching out;
    if (cfg.algorithm == "ordinal") {
        out = ordinal_baseline(ord);
        rec.theorem_bound = inst.profile.klass == ValuationClass::unit_sum
                                ? static_cast<double>(cfg.n) * cfg.n
                                : std::numeric_limits<double>::infinity();
    } else if (cfg.algorithm == "tsf") {
        out = lambda_tsf(ord, oracle, cfg.lambda);
        rec.params = "lambda=" + std::to_string(cfg.lambda);
        rec.theorem_bound = lambda_tsf_distortion_bound(cfg.n, cfg.lambda);
    } else if (cfg.algorithm == "fmm") {
        if (!inst.partition)
            throw std::invalid_argument("run_one: k-FMM needs a kws/adversarial family");
        out = k_fmm(ord, oracle, *inst.partition);
        rec.params = "k=" + std::to_string(cfg.k);
        rec.theorem_bound = k_fmm_distortion_bound(cfg.n, cfg.k);
    } else if (cfg.algorithm == "fpa") {
        out = fpa(ord, oracle);
        rec.theorem_bound = fpa_distortion_bound(cfg.n);
    } else {
        throw std::invalid_argument("run_one: unknown algorithm " + cfg.algorithm);
    }

    rec.alg_welfare = social_welfare(out, inst.profile);
    rec.distortion = distortion_ratio(rec.opt_welfare, rec.alg_welfare);
    rec.max_queries = oracle.max_count();
    rec.bound_satisfied = rec.distortion <= rec.theorem_bound + kWelfareTol;
    rec.runtime_ms = static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                           std::chrono::steady_clock::now() - t0)
                                           .count());
    return rec;
}

std::vector<RunRecord> run_experiment_serial(const ExperimentConfig& cfg) {
    std::vector<RunRecord> records(cfg.reps);
    for (int rep = 0; rep < cfg.reps; ++rep) records[rep] = run_one(cfg, rep);
    return records;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
#ifdef _OPENMP
    std::vector<RunRecord> records(cfg.reps);
    std::exception_ptr error;
    const int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int rep = 0; rep < cfg.reps; ++rep) {
        try {
            records[rep] = run_one(cfg, rep);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return records;
#else
    return run_experiment_serial(cfg);
#endif
}

const char* kCsvHeader =
    "family,n,algorithm,params,seed,opt_welfare,alg_welfare,distortion,max_queries,"
    "theorem_bound,bound_satisfied,runtime_ms";

namespace {

std::string fmt_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << kCsvHeader << '\n';
    for (const RunRecord& r : records) {
        os << r.family << ',' << r.n << ',' << r.algorithm << ',' << r.params << ',' << r.seed
           << ',' << fmt_double(r.opt_welfare) << ',' << fmt_double(r.alg_welfare) << ','
           << fmt_double(r.distortion) << ',' << r.max_queries << ','
           << fmt_double(r.theorem_bound) << ',' << (r.bound_satisfied ? 1 : 0) << ',' << 0
           << '\n';
    }
}

std::string csv_string(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    write_csv(os, records);
    return os.str();
}

bool apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "algorithm") cfg.algorithm = value;
    else if (key == "family") cfg.family = value;
    else if (key == "n") cfg.n = std::stoi(value);
    else if (key == "k") cfg.k = std::stoi(value);
    else if (key == "lambda") cfg.lambda = std::stoi(value);
    else if (key == "eps") cfg.eps = std::stod(value);
    else if (key == "xi") cfg.xi = std::stod(value);
    else if (key == "tail") cfg.tail = std::stod(value);
    else if (key == "reps") cfg.reps = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "out") cfg.out = value;
    else if (key == "threads") cfg.threads = std::stoi(value);
    else return false;
    return true;
}

ExperimentConfig load_config(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!apply_config_entry(cfg, key, value))
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key " + key);
    }
    return cfg;
}

}  // namespace qlm::bench
