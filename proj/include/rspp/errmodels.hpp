#pragma once

#include <span>
#include <string>
#include <variant>

#include "rspp/errors.hpp"

namespace rspp {

// Parametric pseudorange-error families. All parameters in meters except
// shape/weight parameters, which are dimensionless.

struct GaussianModel {
    double mu = 0.0;
    double sigma = 1.0;  // > 0
};

struct LogisticModel {
    double m = 0.0;
    double s = 1.0;  // > 0
};

/// Two-component Gaussian mixture, component 1 carries the larger weight.
struct BgmmModel {
    double p1 = 0.5;  // in (0, 1)
    double mu1 = 0.0;
    double sigma1 = 1.0;  // > 0
    double mu2 = 0.0;
    double sigma2 = 1.0;  // > 0
};

/// Location-scale Student's t with dof nu.
struct StudentTModel {
    double c = 0.0;
    double lambda = 1.0;  // > 0
    double nu = 1.0;      // > 0
};

using DistributionModel =
    std::variant<GaussianModel, LogisticModel, BgmmModel, StudentTModel>;

/// Throws ValidationError when a parameter is out of its domain.
void validate(const DistributionModel& model);

// Densities. The log forms are overflow-safe and are what the likelihood
// code sums; pdf == exp(log_pdf) up to rounding.
double pdf(double x, const GaussianModel& model);
double pdf(double x, const LogisticModel& model);
double pdf(double x, const BgmmModel& model);
double pdf(double x, const StudentTModel& model);
double pdf(double x, const DistributionModel& model);

double log_pdf(double x, const GaussianModel& model);
double log_pdf(double x, const LogisticModel& model);
double log_pdf(double x, const BgmmModel& model);
double log_pdf(double x, const StudentTModel& model);
double log_pdf(double x, const DistributionModel& model);

double cdf(double x, const LogisticModel& model);
double cdf(double x, const GaussianModel& model);

/// Inverse-CDF draw from a logistic model; u must lie strictly in (0, 1).
double logistic_sample(double u, const LogisticModel& model);

/// Sum of log densities. Throws NonFiniteSample on NaN/inf entries.
double log_likelihood(const DistributionModel& model, std::span<const double> samples);

/// Overall standard deviation of the model (mixture pooled for BGMM;
/// infinite for Student's t with nu <= 2).
double model_stddev(const DistributionModel& model);

/// Scale parameter used to normalize residuals drawn from the model:
/// sigma (gaussian), s (logistic), lambda (student_t), pooled standard
/// deviation (bgmm).
double model_scale(const DistributionModel& model);

/// Lowercase tag used in serialized form: gaussian|logistic|bgmm|student_t.
std::string model_type_name(const DistributionModel& model);

}  // namespace rspp
