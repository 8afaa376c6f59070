// parbench: times the OpenMP execution path against the serial reference on
// identical workloads (batch epoch solves and the scale-mismatch sweep) and
// verifies the results are bit-identical. Exits nonzero on any mismatch.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <omp.h>
#include <vector>

#include "rspp/io.hpp"
#include "rspp/simulate.hpp"

using namespace rspp;

namespace {

template <typename F>
double time_s(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_solutions(const std::vector<EpochSolveResult>& a,
                    const std::vector<EpochSolveResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].ok != b[i].ok || a[i].epoch_index != b[i].epoch_index) return false;
        if (!a[i].ok) continue;
        const SolveReport &ra = a[i].report, &rb = b[i].report;
        if (ra.iterations != rb.iterations || ra.converged != rb.converged) return false;
        if (ra.state.position.x != rb.state.position.x ||
            ra.state.position.y != rb.state.position.y ||
            ra.state.position.z != rb.state.position.z ||
            ra.objective != rb.objective) {
            return false;
        }
    }
    return true;
}

bool same_sweep(const SweepResult& a, const SweepResult& b) {
    if (a.records.size() != b.records.size()) return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const AlphaRecord &ra = a.records[i], &rb = b.records[i];
        if (ra.alpha != rb.alpha || ra.rmse_3d != rb.rmse_3d || ra.std_3d != rb.std_3d ||
            ra.mean_iterations != rb.mean_iterations ||
            ra.failed_trials != rb.failed_trials) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial-vs-OpenMP benchmark of the batch kernels"};
    std::string scenario_path = "data/default_scenario.json";
    int epochs = 2000, trials = 500, threads = 0;
    std::uint64_t seed = 42;
    app.add_option("--scenario", scenario_path, "scenario JSON")->check(CLI::ExistingFile);
    app.add_option("--epochs", epochs, "epochs for the solve workload");
    app.add_option("--trials", trials, "trials per alpha for the sweep workload");
    app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");
    app.add_option("--seed", seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

    if (threads > 0) omp_set_num_threads(threads);

    try {
        const GeometryScenario scenario = read_scenario(scenario_path);
        const DistributionModel noise = LogisticModel{0.0, 10.0};
        const SolverConfig config;

        std::vector<EpochObservations> batch;
        batch.reserve(static_cast<std::size_t>(epochs));
        for (int e = 0; e < epochs; ++e) {
            batch.push_back(generate_epoch(scenario, noise, mix_seed(seed, 0, e), e));
        }

        std::vector<EpochSolveResult> serial_solutions, omp_solutions;
        const double t_serial = time_s([&] {
            serial_solutions =
                solve_epochs(batch, EstimatorKind::Lqlc, config, Execution::Serial);
        });
        const double t_omp = time_s([&] {
            omp_solutions =
                solve_epochs(batch, EstimatorKind::Lqlc, config, Execution::OpenMp);
        });
        const bool solve_ok = same_solutions(serial_solutions, omp_solutions);
        std::printf("solve_epochs  %6d epochs  serial %8.3f s  openmp %8.3f s  "
                    "speedup %.2fx  results %s\n",
                    epochs, t_serial, t_omp, t_serial / t_omp,
                    solve_ok ? "identical" : "DIFFER");

        MismatchSweepConfig sweep;
        sweep.s_true = 10.0;
        sweep.alphas = {0.1, 1.0, 10.0};
        sweep.trials_per_alpha = trials;
        sweep.seed = seed;
        SweepResult serial_sweep, omp_sweep;
        const double t_sweep_serial = time_s(
            [&] { serial_sweep = scale_mismatch_sweep(scenario, sweep, Execution::Serial); });
        const double t_sweep_omp = time_s(
            [&] { omp_sweep = scale_mismatch_sweep(scenario, sweep, Execution::OpenMp); });
        const bool sweep_ok = same_sweep(serial_sweep, omp_sweep);
        std::printf("sweep_scale   %3zu x %-5d trials  serial %8.3f s  openmp %8.3f s  "
                    "speedup %.2fx  results %s\n",
                    sweep.alphas.size(), trials, t_sweep_serial, t_sweep_omp,
                    t_sweep_serial / t_sweep_omp, sweep_ok ? "identical" : "DIFFER");

        std::printf("omp max threads: %d\n", omp_get_max_threads());
        return (solve_ok && sweep_ok) ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "parbench failed: %s\n", e.what());
        return 1;
    }
}
