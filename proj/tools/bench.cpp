// Copyright 2026 The pdolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Benchmarks the OpenMP kernels against their serial reference
// implementations and verifies that both produce identical results.
// Thread count is controlled by OMP_NUM_THREADS.

#include <chrono>
#include <cstdio>
#include <functional>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pdolab/bell.hpp"
#include "pdolab/quantum_sim.hpp"
#include "pdolab/tomography.hpp"

namespace {

using namespace pdolab;

double time_ms(const std::function<void()> &f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report_row(const char *name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-22s %10.1f ms %10.1f ms   x%-5.2f %s\n", name, serial_ms, parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
                identical ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Serial vs OpenMP benchmark for the sampling and bootstrap kernels"};
    std::uint64_t shots = 2000000;
    std::uint64_t quorum_shots = 20000;
    std::size_t resamples = 100;
    std::uint64_t seed = 42;
    app.add_option("--shots", shots, "Shots for the sampling benchmark")->capture_default_str();
    app.add_option("--quorum-shots", quorum_shots, "Shots per setting for the bootstrap benchmark")
        ->capture_default_str();
    app.add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; both columns run serially\n");
#endif

    const SourceModel src{0.952, ComplexMatrix::identity(2)};

    // Three-measurement timeline, the most branch-heavy setting in the quorum.
    const std::vector<Measure> measures = {
        Measure{Carrier::B, "t1", axis_z()},
        Measure{Carrier::A, "t1", axis_z()},
        Measure{Carrier::A, "t2", axis_z()},
    };
    const MeasurementTimeline timeline = make_timeline(measures, src);

    CountsTable serial_counts, parallel_counts;
    const double sample_serial_ms =
        time_ms([&] { serial_counts = sample_serial(timeline, shots, seed); });
    const double sample_parallel_ms =
        time_ms([&] { parallel_counts = sample(timeline, shots, seed); });
    report_row("sample", sample_serial_ms, sample_parallel_ms, serial_counts == parallel_counts);

    const QuorumPlan plan = build_quorum(quorum_shots);
    const QuorumData data = measure_quorum(plan, src, RunMode::sampled, seed);
    double se_serial = 0.0, se_parallel = 0.0;
    const double boot_serial_ms =
        time_ms([&] { se_serial = bootstrap_c13_stderr_serial(plan, data, seed, resamples); });
    const double boot_parallel_ms =
        time_ms([&] { se_parallel = bootstrap_c13_stderr(plan, data, seed, resamples); });
    report_row("bootstrap_c13_stderr", boot_serial_ms, boot_parallel_ms, se_serial == se_parallel);

    return 0;
}
