#pragma once

#include <span>
#include <vector>

#include "rspp/solver.hpp"

namespace rspp {

/// Five-number-style summary: quartiles use linear interpolation between
/// order statistics (the common "type 7" rule), whiskers are the extreme
/// data points within 1.5 * IQR of the quartiles, stddev is population.
struct SummaryStats {
    double mean = 0.0;
    double stddev = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
};

SummaryStats summarize(std::span<const double> values);  // needs >= 1 value

struct BenchReport {
    EstimatorKind estimator = EstimatorKind::Ls;
    int runs = 0;
    int warmup = 0;
    std::vector<double> times_s;        // one per timed run
    std::vector<int> iteration_counts;  // one per timed run
    SummaryStats time_summary;
    SummaryStats iteration_summary;
};

/// Repeatedly solves the same epoch from cold start on one thread, timing
/// each solve; `warmup` untimed runs come first.
BenchReport run_bench(const EpochObservations& epoch, EstimatorKind kind, int runs,
                      const SolverConfig& config = {}, int warmup = 10);

}  // namespace rspp
