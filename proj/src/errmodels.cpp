#include "rspp/errmodels.hpp"

#include <cmath>
#include <limits>

namespace rspp {

namespace {

constexpr double kLogSqrt2Pi = 0.9189385332046727;  // ln sqrt(2*pi)

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace

void validate(const DistributionModel& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianModel>) {
                require(std::isfinite(m.mu) && std::isfinite(m.sigma) && m.sigma > 0.0,
                        "gaussian: sigma must be positive and finite");
            } else if constexpr (std::is_same_v<T, LogisticModel>) {
                require(std::isfinite(m.m) && std::isfinite(m.s) && m.s > 0.0,
                        "logistic: s must be positive and finite");
            } else if constexpr (std::is_same_v<T, BgmmModel>) {
                require(std::isfinite(m.p1) && m.p1 > 0.0 && m.p1 < 1.0,
                        "bgmm: p1 must lie in (0, 1)");
                require(std::isfinite(m.mu1) && std::isfinite(m.mu2),
                        "bgmm: means must be finite");
                require(std::isfinite(m.sigma1) && m.sigma1 > 0.0 &&
                            std::isfinite(m.sigma2) && m.sigma2 > 0.0,
                        "bgmm: sigmas must be positive and finite");
            } else {
                require(std::isfinite(m.c) && std::isfinite(m.lambda) && m.lambda > 0.0,
                        "student_t: lambda must be positive and finite");
                require(std::isfinite(m.nu) && m.nu > 0.0,
                        "student_t: nu must be positive and finite");
            }
        },
        model);
}

double log_pdf(double x, const GaussianModel& model) {
    const double t = (x - model.mu) / model.sigma;
    return -0.5 * t * t - std::log(model.sigma) - kLogSqrt2Pi;
}

double pdf(double x, const GaussianModel& model) { return std::exp(log_pdf(x, model)); }

double log_pdf(double x, const LogisticModel& model) {
    // f = e^{-|z|} / (s (1 + e^{-|z|})^2), even in z
    const double a = std::abs(x - model.m) / model.s;
    return -a - std::log(model.s) - 2.0 * std::log1p(std::exp(-a));
}

double pdf(double x, const LogisticModel& model) {
    const double a = std::abs(x - model.m) / model.s;
    const double ea = std::exp(-a);
    const double t = 1.0 + ea;
    return ea / (model.s * t * t);
}

double log_pdf(double x, const BgmmModel& model) {
    const double l1 = std::log(model.p1) + log_pdf(x, GaussianModel{model.mu1, model.sigma1});
    const double l2 =
        std::log(1.0 - model.p1) + log_pdf(x, GaussianModel{model.mu2, model.sigma2});
    const double hi = std::max(l1, l2);
    if (hi == -std::numeric_limits<double>::infinity()) return hi;
    return hi + std::log1p(std::exp(std::min(l1, l2) - hi));
}

double pdf(double x, const BgmmModel& model) {
    return model.p1 * pdf(x, GaussianModel{model.mu1, model.sigma1}) +
           (1.0 - model.p1) * pdf(x, GaussianModel{model.mu2, model.sigma2});
}

double log_pdf(double x, const StudentTModel& model) {
    const double t = (x - model.c) / model.lambda;
    return std::lgamma(0.5 * (model.nu + 1.0)) - std::lgamma(0.5 * model.nu) -
           0.5 * std::log(model.nu * M_PI) - std::log(model.lambda) -
           0.5 * (model.nu + 1.0) * std::log1p(t * t / model.nu);
}

double pdf(double x, const StudentTModel& model) { return std::exp(log_pdf(x, model)); }

double pdf(double x, const DistributionModel& model) {
    return std::visit([x](const auto& m) { return pdf(x, m); }, model);
}

double log_pdf(double x, const DistributionModel& model) {
    return std::visit([x](const auto& m) { return log_pdf(x, m); }, model);
}

double cdf(double x, const LogisticModel& model) {
    const double z = (x - model.m) / model.s;
    return 1.0 / (1.0 + std::exp(-z));
}

double cdf(double x, const GaussianModel& model) {
    return 0.5 * std::erfc(-(x - model.mu) / (model.sigma * M_SQRT2));
}

double logistic_sample(double u, const LogisticModel& model) {
    if (!(u > 0.0 && u < 1.0)) {
        throw InvalidUniform("logistic inverse CDF needs u in (0, 1)");
    }
    return model.m + model.s * std::log(u / (1.0 - u));
}

double log_likelihood(const DistributionModel& model, std::span<const double> samples) {
    double total = 0.0;
    for (double x : samples) {
        if (!std::isfinite(x)) throw NonFiniteSample("non-finite sample in likelihood");
        total += log_pdf(x, model);
    }
    return total;
}

double model_stddev(const DistributionModel& model) {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianModel>) {
                return m.sigma;
            } else if constexpr (std::is_same_v<T, LogisticModel>) {
                return m.s * M_PI / std::sqrt(3.0);
            } else if constexpr (std::is_same_v<T, BgmmModel>) {
                const double mean = m.p1 * m.mu1 + (1.0 - m.p1) * m.mu2;
                const double second = m.p1 * (m.sigma1 * m.sigma1 + m.mu1 * m.mu1) +
                                      (1.0 - m.p1) * (m.sigma2 * m.sigma2 + m.mu2 * m.mu2);
                return std::sqrt(second - mean * mean);
            } else {
                if (m.nu <= 2.0) return std::numeric_limits<double>::infinity();
                return m.lambda * std::sqrt(m.nu / (m.nu - 2.0));
            }
        },
        model);
}

double model_scale(const DistributionModel& model) {
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianModel>) return m.sigma;
            else if constexpr (std::is_same_v<T, LogisticModel>) return m.s;
            else if constexpr (std::is_same_v<T, BgmmModel>) return model_stddev(model);
            else return m.lambda;
        },
        model);
}

std::string model_type_name(const DistributionModel& model) {
    return std::visit(
        [](const auto& m) -> std::string {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianModel>) return "gaussian";
            else if constexpr (std::is_same_v<T, LogisticModel>) return "logistic";
            else if constexpr (std::is_same_v<T, BgmmModel>) return "bgmm";
            else return "student_t";
        },
        model);
}

}  // namespace rspp
