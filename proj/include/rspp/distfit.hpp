#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rspp/errmodels.hpp"

namespace rspp {

struct FitReport {
    DistributionModel model;
    double log_likelihood = 0.0;  // equals log_likelihood(model, samples)
    int iterations = 0;
    bool converged = false;
    std::size_t sample_count = 0;
};

/// Log-likelihood of the current parameters at the start of each EM
/// iteration; non-decreasing up to rounding.
struct EmTrace {
    std::vector<double> log_likelihood_per_iteration;
};

/// Closed-form Gaussian MLE (variance divisor n). Needs >= 2 samples with
/// spread; throws InsufficientSamples / NonFiniteSample / DegenerateSample.
FitReport fit_gaussian(std::span<const double> samples);

/// Logistic MLE by damped Newton on (m, s); init m = median,
/// s = std * sqrt(3)/pi. Throws NoConvergence past 100 iterations.
FitReport fit_logistic(std::span<const double> samples);

/// Location-scale Student's t by ECME: closed-form weighted updates for
/// (c, lambda), dof by maximizing the profile likelihood over
/// nu in [0.3, 1e3]. Throws NoConvergence past the iteration cap.
FitReport fit_student_t(std::span<const double> samples);

/// Two-component Gaussian mixture by EM with log-space responsibilities.
/// Default init splits the sorted sample at the median with equal weights.
/// Converges when the per-iteration likelihood gain drops below `tol` nats;
/// throws ComponentCollapse when a component's sigma falls under
/// 1e-6 * sample std (or a weight vanishes), NoConvergence past the cap.
/// Components are reordered so the larger weight comes first.
std::pair<FitReport, EmTrace> fit_bgmm_em(std::span<const double> samples,
                                          const std::optional<BgmmModel>& init = {},
                                          double tol = 1e-8, int max_iterations = 5000);

/// Asymptotic expansion of the digamma function, x > 0.
double digamma(double x);

}  // namespace rspp
