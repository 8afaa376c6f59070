#include "rspp/bench.hpp"

#include <algorithm>
#include <cmath>

namespace rspp {

namespace {

// linear interpolation between order statistics of the sorted sample
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SummaryStats summarize(std::span<const double> values) {
    if (values.empty()) throw InsufficientSeries("summarize: empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    SummaryStats stats;
    const double n = static_cast<double>(sorted.size());
    double sum = 0.0;
    for (double v : sorted) sum += v;
    stats.mean = sum / n;
    double ss = 0.0;
    for (double v : sorted) ss += (v - stats.mean) * (v - stats.mean);
    stats.stddev = std::sqrt(ss / n);
    stats.median = quantile_sorted(sorted, 0.5);
    stats.q1 = quantile_sorted(sorted, 0.25);
    stats.q3 = quantile_sorted(sorted, 0.75);

    const double iqr = stats.q3 - stats.q1;
    const double lo_fence = stats.q1 - 1.5 * iqr;
    const double hi_fence = stats.q3 + 1.5 * iqr;
    stats.whisker_low = sorted.back();
    stats.whisker_high = sorted.front();
    for (double v : sorted) {
        if (v >= lo_fence) {
            stats.whisker_low = v;  // sorted: first value above the fence
            break;
        }
    }
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (*it <= hi_fence) {
            stats.whisker_high = *it;
            break;
        }
    }
    return stats;
}

BenchReport run_bench(const EpochObservations& epoch, EstimatorKind kind, int runs,
                      const SolverConfig& config, int warmup) {
    if (runs < 1) throw ValidationError("run_bench: runs must be >= 1");
    if (warmup < 0) throw ValidationError("run_bench: warmup must be >= 0");

    BenchReport report;
    report.estimator = kind;
    report.runs = runs;
    report.warmup = warmup;
    report.times_s.reserve(static_cast<std::size_t>(runs));
    report.iteration_counts.reserve(static_cast<std::size_t>(runs));

    const StateEstimate start = cold_start(epoch);
    for (int i = 0; i < warmup; ++i) (void)irls_solve(epoch, kind, start, config);
    for (int i = 0; i < runs; ++i) {
        const SolveReport solve = irls_solve(epoch, kind, start, config);
        report.times_s.push_back(solve.wall_time_s);
        report.iteration_counts.push_back(solve.iterations);
    }

    report.time_summary = summarize(report.times_s);
    std::vector<double> iters(report.iteration_counts.begin(), report.iteration_counts.end());
    report.iteration_summary = summarize(iters);
    return report;
}

}  // namespace rspp
