#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rspp/bench.hpp"
#include "rspp/distfit.hpp"
#include "rspp/errmodels.hpp"
#include "rspp/simulate.hpp"
#include "rspp/solver.hpp"

namespace rspp {

// CSV/JSON formats. All writers are deterministic: fixed column orders,
// fixed float formatting ("%.6f" for meter-valued columns), "\n" line ends.
// Readers throw ParseError with file/line context on malformed input.

// -- observation epochs -------------------------------------------------------
// header: epoch,sat_id,constellation,sat_x,sat_y,sat_z,pseudorange,scale

std::vector<EpochObservations> read_epochs(const std::string& path);
void write_epochs(const std::string& path, std::span<const EpochObservations> epochs);

// -- solutions ---------------------------------------------------------------
// header: epoch,x,y,z,bias_gps,bias_bds,iterations,converged,objective,wall_time_s
// Missing constellations and failed epochs carry "nan" fields; converged is 0/1.

struct SolutionRow {
    int epoch = 0;
    double x = 0.0, y = 0.0, z = 0.0;
    double bias_gps = 0.0, bias_bds = 0.0;
    int iterations = 0;
    int converged = 0;
    double objective = 0.0;
    double wall_time_s = 0.0;
};

std::vector<SolutionRow> solution_rows(std::span<const EpochSolveResult> results);
void write_solutions(const std::string& path, std::span<const SolutionRow> rows);
std::vector<SolutionRow> read_solutions(const std::string& path);

// -- per-observation residuals (solver export, feeds the sample reader) -------
// header: epoch,sat_id,residual,normalized_residual,weight

void write_residuals(const std::string& path, std::span<const EpochSolveResult> results,
                     std::span<const EpochObservations> epochs);

// -- scale-mismatch sweep -------------------------------------------------------
// header: alpha,rmse_3d,std_3d,mean_iterations,failed_trials

void write_sweep(const std::string& path, const SweepResult& sweep);
SweepResult read_sweep(const std::string& path);

// -- plain sample series ---------------------------------------------------------
// Accepts a headerless single numeric column, a one-column CSV with any
// header, or any CSV with a "residual" column.

std::vector<double> read_samples(const std::string& path);

// -- distribution models / fit reports (JSON) ------------------------------------
// {"type": "gaussian"|"logistic"|"bgmm"|"student_t", ...flat parameters}

std::string model_to_json(const DistributionModel& model);
DistributionModel model_from_json_text(const std::string& text);
DistributionModel read_model(const std::string& path);
void write_model(const std::string& path, const DistributionModel& model);

/// Model JSON with log_likelihood/iterations/converged/sample_count merged
/// in at the top level, so the file also parses as a plain model.
void write_fit_report(const std::string& path, const FitReport& report);
std::string fit_report_to_json(const FitReport& report);

// -- histogram overlay --------------------------------------------------------------
// header: bin_center,empirical[,<model name>...]; densities, equal-width bins.

void write_histogram(const std::string& path, std::span<const double> samples,
                     const std::vector<std::pair<std::string, DistributionModel>>& models,
                     int bins = 100);

// -- run metrics ---------------------------------------------------------------------

struct RunMetrics {
    std::string estimator;
    double rmse_3d = 0.0;
    double std_3d = 0.0;
    std::size_t epochs = 0;
    std::optional<double> reduction_vs_baseline_pct;  // RMSE reduction, percent
};

void write_metrics(const std::string& path, const RunMetrics& metrics);

// -- geometry scenarios (JSON) ----------------------------------------------------------

GeometryScenario read_scenario(const std::string& path);
void write_scenario(const std::string& path, const LlhPosition& receiver_llh,
                    const std::map<Constellation, double>& clock_biases,
                    std::span<const ScenarioSatellite> satellites);

/// {"truth_llh": {...}, "truth_ecef_m": [x, y, z]} next to generated epochs.
void write_truth(const std::string& path, const LlhPosition& llh);
LlhPosition read_truth(const std::string& path);

// -- bench summary (JSON) -----------------------------------------------------------------

std::string bench_to_json(const BenchReport& report);
void write_bench(const std::string& path, std::span<const BenchReport> reports);

// -- raw bench runs (CSV) -----------------------------------------------------------------
// header: run,iterations,time_s

void write_bench_runs(const std::string& path, const BenchReport& report);

}  // namespace rspp
