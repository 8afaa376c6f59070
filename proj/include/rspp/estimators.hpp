#pragma once

#include <string>

#include "rspp/errors.hpp"

namespace rspp {

/// Residual penalty family used by the IRLS solver.
///  Ls:   rho(r) = r^2 / 2                  (quadratic)
///  Lqlc: rho(r) = ln(cosh r + 1)           (logistic negative log-likelihood,
///                                           linear growth in the tails)
enum class EstimatorKind { Ls, Lqlc };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& s);  // "ls" | "lqlc"

/// Penalty rho(r) on a normalized residual. Finite for all finite r (the
/// Lqlc branch switches to an exact tail form past |r| = 30 instead of
/// overflowing cosh).
double cost(EstimatorKind kind, double r);

/// d rho / d r. Ls: r. Lqlc: tanh(r/2), saturating at +-1.
double influence(EstimatorKind kind, double r);

/// influence(r)/r, the IRLS weight. Even, positive, and exactly
/// weight(r)*r == influence(r). Lqlc: tanh(r/2)/r in (0, 1/2], evaluated by
/// series for |r| < 1e-4 where the quotient loses precision; weight(0) = 1/2.
double weight(EstimatorKind kind, double r);

}  // namespace rspp
