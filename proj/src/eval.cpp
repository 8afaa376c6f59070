#include "rspp/eval.hpp"

#include <cmath>

namespace rspp {

std::vector<double> error_series(std::span<const SolveReport> solutions,
                                 const EcefPosition& truth) {
    std::vector<double> errors;
    errors.reserve(solutions.size());
    for (const auto& sol : solutions)
        errors.push_back(norm(sol.state.position - truth));
    return errors;
}

std::vector<double> error_series(std::span<const EpochSolveResult> results,
                                 const EcefPosition& truth) {
    std::vector<double> errors;
    errors.reserve(results.size());
    for (const auto& res : results) {
        if (res.ok) errors.push_back(norm(res.report.state.position - truth));
    }
    return errors;
}

double rmse_3d(std::span<const double> errors) {
    if (errors.empty()) throw InsufficientSeries("rmse_3d: empty error series");
    double sum_sq = 0.0;
    for (double e : errors) sum_sq += e * e;
    return std::sqrt(sum_sq / static_cast<double>(errors.size()));
}

double std_3d(std::span<const double> errors) {
    if (errors.size() < 2) throw InsufficientSeries("std_3d: need at least 2 errors");
    const double n = static_cast<double>(errors.size());
    double sum = 0.0;
    for (double e : errors) sum += e;
    const double mean = sum / n;
    double ss = 0.0;
    for (double e : errors) ss += (e - mean) * (e - mean);
    return std::sqrt(ss / n);
}

}  // namespace rspp
