// Compares the serial reference runner against the OpenMP runner on a fixed
// sweep and checks that both produce byte-identical CSV.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "qlm/bench.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace qlm::bench;

namespace {

long time_ms(const std::function<std::vector<RunRecord>()>& f, std::string& csv) {
    const auto t0 = std::chrono::steady_clock::now();
    csv = csv_string(f());
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0)
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    int reps = argc > 1 ? std::stoi(argv[1]) : 64;
    int n = argc > 2 ? std::stoi(argv[2]) : 128;

    std::vector<ExperimentConfig> sweep;
    for (const char* alg : {"tsf", "fpa"}) {
        ExperimentConfig cfg;
        cfg.algorithm = alg;
        cfg.family = "uniform-unitsum";
        cfg.n = n;
        cfg.lambda = 2;
        cfg.reps = reps;
        cfg.seed = 20240901;
        sweep.push_back(cfg);
    }

#ifdef _OPENMP
    std::cout << "OpenMP threads available: " << omp_get_max_threads() << "\n";
#else
    std::cout << "built without OpenMP; parallel runner degrades to serial\n";
#endif
    std::cout << "sweep: " << sweep.size() << " configs x " << reps << " reps, n = " << n << "\n\n";
    std::cout << "algorithm   serial_ms   parallel_ms   speedup   identical_csv\n";

    bool all_identical = true;
    for (const auto& cfg : sweep) {
        std::string serial_csv, parallel_csv;
        const long ts = time_ms([&] { return run_experiment_serial(cfg); }, serial_csv);
        const long tp = time_ms([&] { return run_experiment(cfg); }, parallel_csv);
        const bool same = serial_csv == parallel_csv;
        all_identical = all_identical && same;
        std::printf("%-10s %10ld %13ld %9.2f   %s\n", cfg.algorithm.c_str(), ts, tp,
                    tp > 0 ? static_cast<double>(ts) / tp : 0.0, same ? "yes" : "NO");
    }
    return all_identical ? 0 : 1;
}
