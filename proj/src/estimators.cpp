#include "rspp/estimators.hpp"

#include <cmath>

namespace rspp {

std::string to_string(EstimatorKind kind) {
    return kind == EstimatorKind::Ls ? "ls" : "lqlc";
}

EstimatorKind estimator_from_string(const std::string& s) {
    if (s == "ls") return EstimatorKind::Ls;
    if (s == "lqlc") return EstimatorKind::Lqlc;
    throw ParseError("unknown estimator '" + s + "' (expected ls or lqlc)");
}

double cost(EstimatorKind kind, double r) {
    if (kind == EstimatorKind::Ls) return 0.5 * r * r;
    const double a = std::abs(r);
    if (a > 30.0) {
        // ln(cosh r + 1) = a + 2 ln(1 + e^{-a}) - ln 2, exact rewrite
        return a + 2.0 * std::log1p(std::exp(-a)) - M_LN2;
    }
    return std::log(std::cosh(r) + 1.0);
}

double weight(EstimatorKind kind, double r) {
    if (kind == EstimatorKind::Ls) return 1.0;
    const double a = std::abs(r);
    if (a < 1e-4) {
        // tanh(r/2)/r = 1/2 - r^2/24 + O(r^4); removable singularity at 0
        return 0.5 - r * r / 24.0;
    }
    return std::tanh(0.5 * a) / a;
}

double influence(EstimatorKind kind, double r) {
    // defined through the weight so that weight(r)*r == influence(r) bitwise
    return weight(kind, r) * r;
}

}  // namespace rspp
