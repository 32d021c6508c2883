// Benchmarks the trial farm: serial reference path (workers = 1) against the
// OpenMP-parallel path, on the same spec. Also asserts the two produce
// identical reports apart from wall times.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

#include "asep/harness.hpp"

using namespace asep;

namespace {

struct BenchResult {
    double seconds = 0.0;
    std::uint64_t events = 0;
    Report report;
};

BenchResult time_run(const ExperimentSpec& spec, int workers) {
    RunOptions opts;
    opts.workers = workers;
    const auto start = std::chrono::steady_clock::now();
    BenchResult out;
    out.report = run_speed_experiment(spec, opts);
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                      .count();
    for (const auto& r : out.report.records) out.events += r.events;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Speed;
    spec.p = 0.7;
    spec.L = 1;
    spec.t = argc > 1 ? std::strtod(argv[1], nullptr) : 50.0;
    spec.n_trials = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 200;
    spec.master_seed = 4242;
    const int workers = argc > 3 ? std::atoi(argv[3]) : 0;  // 0 = runtime default

    std::printf("spec: p=%.2f L=%d t=%.0f n=%llu\n", spec.p, spec.L, spec.t,
                static_cast<unsigned long long>(spec.n_trials));

    const BenchResult serial = time_run(spec, 1);
    std::printf("serial   (workers=1): %8.3f s, %llu events, %6.1f ns/event\n",
                serial.seconds, static_cast<unsigned long long>(serial.events),
                1e9 * serial.seconds / static_cast<double>(serial.events));

    const BenchResult parallel = time_run(spec, workers);
    std::printf("parallel (workers=%d): %8.3f s, %llu events, %6.1f ns/event\n", workers,
                parallel.seconds, static_cast<unsigned long long>(parallel.events),
                1e9 * parallel.seconds / static_cast<double>(parallel.events));
    std::printf("speedup: %.2fx\n", serial.seconds / parallel.seconds);

    if (!reports_equal_ignoring_walltime(serial.report, parallel.report)) {
        std::printf("ERROR: serial and parallel reports differ\n");
        return 1;
    }
    std::printf("reports identical (wall times ignored)\n");
    return 0;
}
