// rspp: robust GNSS single-point-positioning toolkit.
//
// Subcommands: gen-synthetic, solve, fit-dist, sweep-scale, bench.
// Exit codes: 0 success, 1 bad usage/input, 2 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rspp/eval.hpp"
#include "rspp/io.hpp"

namespace fs = std::filesystem;
using namespace rspp;

namespace {

LlhPosition parse_truth_llh(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) parts.push_back(field);
    if (parts.size() != 3) {
        throw ValidationError("--truth-llh expects lat,lon,height (got '" + text + "')");
    }
    char* end = nullptr;
    LlhPosition llh;
    llh.latitude_deg = std::strtod(parts[0].c_str(), &end);
    llh.longitude_deg = std::strtod(parts[1].c_str(), &end);
    llh.height_m = std::strtod(parts[2].c_str(), &end);
    validate(llh);
    return llh;
}

// --scales column | constant:<v> | model:<path>
void apply_scales(std::vector<EpochObservations>& epochs, const std::string& spec) {
    if (spec == "column") return;
    double value = 0.0;
    if (spec.rfind("constant:", 0) == 0) {
        const std::string num = spec.substr(9);
        char* end = nullptr;
        value = std::strtod(num.c_str(), &end);
        if (end == num.c_str() || *end != '\0' || !(value > 0.0)) {
            throw ValidationError("--scales constant:<v> needs a positive number");
        }
    } else if (spec.rfind("model:", 0) == 0) {
        value = model_scale(read_model(spec.substr(6)));
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw ValidationError("--scales model: model has no finite positive scale");
        }
    } else {
        throw ValidationError("--scales must be column, constant:<v> or model:<path>");
    }
    for (auto& epoch : epochs) {
        for (auto& obs : epoch.observations) obs.scale = value;
    }
}

int cmd_gen_synthetic(const std::string& input, const std::string& model_path, int epochs,
                      std::uint64_t seed, const std::string& output_dir) {
    const GeometryScenario scenario = read_scenario(input);
    const DistributionModel model = read_model(model_path);
    if (epochs < 0) throw ValidationError("--epochs must be >= 0");

    std::vector<EpochObservations> out;
    out.reserve(static_cast<std::size_t>(epochs));
    for (int e = 0; e < epochs; ++e) {
        out.push_back(generate_epoch(scenario, model, mix_seed(seed, 0, e), e));
    }
    fs::create_directories(output_dir);
    const std::string epochs_path = (fs::path(output_dir) / "epochs.csv").string();
    const std::string truth_path = (fs::path(output_dir) / "truth.json").string();
    write_epochs(epochs_path, out);
    write_truth(truth_path, ecef_to_llh(scenario.receiver_truth));
    std::cout << "wrote " << epochs_path << " (" << epochs << " epochs) and " << truth_path
              << "\n";
    return 0;
}

int cmd_solve(const std::string& input, const std::string& output_dir,
              const std::string& estimator, const std::string& scales,
              const std::optional<std::string>& truth_text, int max_iter, double tol,
              bool parallel) {
    std::vector<EpochObservations> epochs = read_epochs(input);
    if (epochs.empty()) throw ValidationError("no epochs in " + input);
    apply_scales(epochs, scales);

    std::vector<EstimatorKind> kinds;
    if (estimator == "both") {
        kinds = {EstimatorKind::Ls, EstimatorKind::Lqlc};
    } else {
        kinds = {estimator_from_string(estimator)};
    }

    std::optional<EcefPosition> truth;
    if (truth_text) truth = llh_to_ecef(parse_truth_llh(*truth_text));

    SolverConfig config;
    config.max_iterations = max_iter;
    config.step_tolerance = tol;
    const Execution exec = parallel ? Execution::OpenMp : Execution::Serial;

    fs::create_directories(output_dir);
    std::map<EstimatorKind, double> rmse_by_kind;
    for (EstimatorKind kind : kinds) {
        const auto results = solve_epochs(epochs, kind, config, exec);
        std::size_t failures = 0;
        for (const auto& res : results) {
            if (!res.ok) {
                ++failures;
                std::cerr << "epoch " << res.epoch_index << " (" << to_string(kind)
                          << ") failed: " << res.error << "\n";
            }
        }
        if (failures == results.size()) {
            throw NoConvergence("every epoch failed for estimator " + to_string(kind));
        }

        const std::string tag = to_string(kind);
        const auto rows = solution_rows(results);
        write_solutions((fs::path(output_dir) / ("solutions_" + tag + ".csv")).string(),
                        rows);
        write_residuals((fs::path(output_dir) / ("residuals_" + tag + ".csv")).string(),
                        results, epochs);

        if (truth) {
            const std::vector<double> errors = error_series(results, *truth);
            RunMetrics metrics;
            metrics.estimator = tag;
            metrics.rmse_3d = rmse_3d(errors);
            metrics.std_3d =
                errors.size() >= 2 ? std_3d(errors) : std::nan("");
            metrics.epochs = errors.size();
            rmse_by_kind[kind] = metrics.rmse_3d;
            if (kind == EstimatorKind::Lqlc && rmse_by_kind.count(EstimatorKind::Ls)) {
                metrics.reduction_vs_baseline_pct =
                    100.0 * (1.0 - metrics.rmse_3d / rmse_by_kind[EstimatorKind::Ls]);
            }
            write_metrics((fs::path(output_dir) / ("metrics_" + tag + ".json")).string(),
                          metrics);
        }
        std::cout << to_string(kind) << ": solved " << (results.size() - failures) << "/"
                  << results.size() << " epochs\n";
    }
    return 0;
}

int cmd_fit_dist(const std::string& input, const std::string& output_dir,
                 const std::string& models_csv, int bins) {
    const std::vector<double> samples = read_samples(input);
    if (samples.empty()) throw ValidationError("no samples in " + input);
    if (samples.size() < 100) {
        throw ValidationError("need at least 100 samples to fit, got " +
                              std::to_string(samples.size()));
    }
    if (samples.size() < 10000) {
        std::cerr << "warning: only " << samples.size()
                  << " samples; fitted parameters may be noisy (10000+ recommended)\n";
    }

    std::vector<std::string> names;
    {
        std::stringstream ss(models_csv);
        std::string name;
        while (std::getline(ss, name, ',')) names.push_back(name);
    }
    if (names.empty()) throw ValidationError("--models list is empty");

    fs::create_directories(output_dir);
    std::vector<std::pair<std::string, DistributionModel>> fitted;
    std::vector<std::string> fit_jsons;
    std::vector<std::string> failed;
    for (const std::string& name : names) {
        try {
            FitReport report;
            if (name == "gaussian") {
                report = fit_gaussian(samples);
            } else if (name == "logistic") {
                report = fit_logistic(samples);
            } else if (name == "bgmm") {
                report = fit_bgmm_em(samples).first;
            } else if (name == "student_t") {
                report = fit_student_t(samples);
            } else {
                throw ValidationError("unknown model '" + name + "'");
            }
            write_fit_report((fs::path(output_dir) / ("fit_" + name + ".json")).string(),
                             report);
            fitted.emplace_back(name, report.model);
            fit_jsons.push_back(fit_report_to_json(report));
            std::cout << "fit " << name << ": log_likelihood=" << report.log_likelihood
                      << " iterations=" << report.iterations << "\n";
        } catch (const Error& e) {
            failed.push_back(name);
            std::cerr << "fit " << name << " failed: " << e.what() << "\n";
        }
    }

    if (!fitted.empty()) {
        write_histogram((fs::path(output_dir) / "histogram.csv").string(), samples, fitted,
                        bins);
        std::string all = "[\n";
        for (std::size_t i = 0; i < fit_jsons.size(); ++i) {
            std::string body = fit_jsons[i];
            if (!body.empty() && body.back() == '\n') body.pop_back();
            all += body;
            all += (i + 1 < fit_jsons.size()) ? ",\n" : "\n";
        }
        all += "]\n";
        std::ofstream out((fs::path(output_dir) / "fits.json").string());
        out << all;
    }

    if (!failed.empty()) {
        std::string list;
        for (const auto& name : failed) list += (list.empty() ? "" : ", ") + name;
        throw NoConvergence("fit failed for: " + list);
    }
    return 0;
}

int cmd_sweep_scale(const std::string& input, const std::string& output_dir, double s_true,
                    const std::vector<double>& alphas, int trials, std::uint64_t seed,
                    int max_iter, double tol, bool parallel) {
    const GeometryScenario scenario = read_scenario(input);
    MismatchSweepConfig config;
    config.s_true = s_true;
    config.alphas = alphas;  // empty -> default grid
    config.trials_per_alpha = trials;
    config.seed = seed;
    config.solver.max_iterations = max_iter;
    config.solver.step_tolerance = tol;

    const SweepResult result = scale_mismatch_sweep(
        scenario, config, parallel ? Execution::OpenMp : Execution::Serial);
    fs::create_directories(output_dir);
    const std::string path = (fs::path(output_dir) / "sweep.csv").string();
    write_sweep(path, result);
    std::cout << "wrote " << path << " (" << result.records.size() << " alphas x " << trials
              << " trials)\n";
    return 0;
}

int cmd_bench(const std::string& input, const std::string& output_dir, int epoch_index,
              int runs, int warmup, int max_iter, double tol) {
    const std::vector<EpochObservations> epochs = read_epochs(input);
    if (epochs.empty()) throw ValidationError("no epochs in " + input);
    if (epoch_index < 0 || epoch_index >= static_cast<int>(epochs.size())) {
        throw ValidationError("--epoch out of range (file has " +
                              std::to_string(epochs.size()) + " epochs)");
    }
    SolverConfig config;
    config.max_iterations = max_iter;
    config.step_tolerance = tol;

    fs::create_directories(output_dir);
    std::vector<BenchReport> reports;
    for (EstimatorKind kind : {EstimatorKind::Ls, EstimatorKind::Lqlc}) {
        const BenchReport report =
            run_bench(epochs[static_cast<std::size_t>(epoch_index)], kind, runs, config,
                      warmup);
        std::cout << to_string(kind) << ": mean=" << report.time_summary.mean * 1e3
                  << " ms median=" << report.time_summary.median * 1e3
                  << " ms mean_iterations=" << report.iteration_summary.mean << "\n";
        write_bench_runs(
            (fs::path(output_dir) / ("bench_runs_" + to_string(kind) + ".csv")).string(),
            report);
        reports.push_back(report);
    }
    const std::string path = (fs::path(output_dir) / "bench.json").string();
    write_bench(path, reports);
    std::cout << "wrote " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust GNSS single point positioning toolkit"};
    app.require_subcommand(1);

    // gen-synthetic
    auto* gen = app.add_subcommand("gen-synthetic",
                                   "synthesize observation epochs from a scenario");
    std::string gen_input, gen_model, gen_out;
    int gen_epochs = 1000;
    std::uint64_t gen_seed = 0;
    gen->add_option("--input", gen_input, "scenario JSON")->required()->check(CLI::ExistingFile);
    gen->add_option("--model", gen_model, "error-model JSON")->required()->check(CLI::ExistingFile);
    gen->add_option("--epochs", gen_epochs, "number of epochs");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--output-dir", gen_out, "output directory")->required();

    // solve
    auto* solve = app.add_subcommand("solve", "estimate positions from observation epochs");
    std::string solve_input, solve_out, solve_est = "lqlc", solve_scales = "column";
    std::optional<std::string> solve_truth;
    int solve_max_iter = 100;
    double solve_tol = 1e-4;
    bool solve_parallel = false;
    solve->add_option("--input", solve_input, "epoch CSV")->required()->check(CLI::ExistingFile);
    solve->add_option("--output-dir", solve_out, "output directory")->required();
    solve->add_option("--estimator", solve_est, "ls | lqlc | both")
        ->check(CLI::IsMember({"ls", "lqlc", "both"}));
    solve->add_option("--scales", solve_scales,
                      "column | constant:<v> | model:<path> (scale applied to all rows; "
                      "model uses sigma/s/lambda or the bgmm pooled std)");
    solve->add_option("--truth-llh", solve_truth, "true lat,lon,height for metrics");
    solve->add_option("--max-iter", solve_max_iter, "iteration cap");
    solve->add_option("--tol", solve_tol, "step-norm tolerance [m]");
    solve->add_flag("--parallel", solve_parallel, "solve epochs with OpenMP");

    // fit-dist
    auto* fit = app.add_subcommand("fit-dist", "fit error distributions to samples");
    std::string fit_input, fit_out, fit_models = "gaussian,logistic,bgmm,student_t";
    int fit_bins = 100;
    fit->add_option("--input", fit_input, "sample CSV (single column or 'residual')")
        ->required()
        ->check(CLI::ExistingFile);
    fit->add_option("--output-dir", fit_out, "output directory")->required();
    fit->add_option("--models", fit_models, "comma list of gaussian,logistic,bgmm,student_t");
    fit->add_option("--bins", fit_bins, "histogram bins");

    // sweep-scale
    auto* sweep = app.add_subcommand("sweep-scale",
                                     "Monte-Carlo sweep over assumed/true scale ratios");
    std::string sweep_input, sweep_out;
    double sweep_s_true = 0.0, sweep_tol = 1e-4;
    std::vector<double> sweep_alphas;
    int sweep_trials = 2000, sweep_max_iter = 100;
    std::uint64_t sweep_seed = 0;
    bool sweep_parallel = false;
    sweep->add_option("--input", sweep_input, "scenario JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--output-dir", sweep_out, "output directory")->required();
    sweep->add_option("--s-true", sweep_s_true, "true logistic scale [m]")->required();
    sweep->add_option("--alphas", sweep_alphas,
                      "alpha values (default: 21 log-spaced in [0.1, 10])");
    sweep->add_option("--trials", sweep_trials, "trials per alpha");
    sweep->add_option("--seed", sweep_seed, "RNG seed");
    sweep->add_option("--max-iter", sweep_max_iter, "iteration cap");
    sweep->add_option("--tol", sweep_tol, "step-norm tolerance [m]");
    sweep->add_flag("--parallel", sweep_parallel, "run trials with OpenMP");

    // bench
    auto* bench = app.add_subcommand("bench", "time both estimators on one epoch");
    std::string bench_input, bench_out;
    int bench_epoch = 0, bench_runs = 1000, bench_warmup = 10, bench_max_iter = 100;
    double bench_tol = 1e-4;
    bench->add_option("--input", bench_input, "epoch CSV")->required()->check(CLI::ExistingFile);
    bench->add_option("--output-dir", bench_out, "output directory")->required();
    bench->add_option("--epoch", bench_epoch, "epoch index within the file (0-based)");
    bench->add_option("--runs", bench_runs, "timed runs per estimator");
    bench->add_option("--warmup", bench_warmup, "untimed warm-up runs");
    bench->add_option("--max-iter", bench_max_iter, "iteration cap");
    bench->add_option("--tol", bench_tol, "step-norm tolerance [m]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_synthetic(gen_input, gen_model, gen_epochs, gen_seed, gen_out);
        }
        if (solve->parsed()) {
            return cmd_solve(solve_input, solve_out, solve_est, solve_scales, solve_truth,
                             solve_max_iter, solve_tol, solve_parallel);
        }
        if (fit->parsed()) {
            return cmd_fit_dist(fit_input, fit_out, fit_models, fit_bins);
        }
        if (sweep->parsed()) {
            return cmd_sweep_scale(sweep_input, sweep_out, sweep_s_true, sweep_alphas,
                                   sweep_trials, sweep_seed, sweep_max_iter, sweep_tol,
                                   sweep_parallel);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_input, bench_out, bench_epoch, bench_runs, bench_warmup,
                             bench_max_iter, bench_tol);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
