#pragma once

#include <span>
#include <vector>

#include "rspp/geodesy.hpp"
#include "rspp/solver.hpp"

namespace rspp {

/// 3D position-error norms ||estimate - truth|| per epoch.
std::vector<double> error_series(std::span<const SolveReport> solutions,
                                 const EcefPosition& truth);

/// Same, but over per-epoch solve results; failed epochs are skipped.
std::vector<double> error_series(std::span<const EpochSolveResult> results,
                                 const EcefPosition& truth);

/// Root mean square of the error norms: sqrt(mean(e_i^2)). Needs >= 1 value.
double rmse_3d(std::span<const double> errors);

/// Population standard deviation of the error norms. Needs >= 2 values.
double std_3d(std::span<const double> errors);

}  // namespace rspp
