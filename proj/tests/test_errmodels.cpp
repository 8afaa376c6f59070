#include <doctest.h>

#include <cmath>

#include "rspp/errmodels.hpp"
#include "support/oracles.hpp"

using namespace rspp;

namespace {

const GaussianModel kGauss{0.33, 18.49};
const LogisticModel kLogi{0.42, 9.52};
const BgmmModel kBgmm{0.93, 0.82, 13.97, -6.25, 47.72};
const StudentTModel kStudent{0.46, 13.58, 4.68};

}  // namespace

TEST_CASE("model validation rejects out-of-domain parameters") {
    CHECK_NOTHROW(validate(DistributionModel{kGauss}));
    CHECK_NOTHROW(validate(DistributionModel{kLogi}));
    CHECK_NOTHROW(validate(DistributionModel{kBgmm}));
    CHECK_NOTHROW(validate(DistributionModel{kStudent}));

    CHECK_THROWS_AS(validate(DistributionModel{GaussianModel{0.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(validate(DistributionModel{GaussianModel{std::nan(""), 1.0}}),
                    ValidationError);
    CHECK_THROWS_AS(validate(DistributionModel{LogisticModel{0.0, -1.0}}), ValidationError);
    CHECK_THROWS_AS(validate(DistributionModel{BgmmModel{0.0, 0, 1, 0, 1}}), ValidationError);
    CHECK_THROWS_AS(validate(DistributionModel{BgmmModel{1.0, 0, 1, 0, 1}}), ValidationError);
    CHECK_THROWS_AS(validate(DistributionModel{BgmmModel{0.5, 0, 1, 0, -2}}),
                    ValidationError);
    CHECK_THROWS_AS(validate(DistributionModel{StudentTModel{0.0, 1.0, 0.0}}),
                    ValidationError);
    CHECK_THROWS_AS(validate(DistributionModel{StudentTModel{0.0, -1.0, 3.0}}),
                    ValidationError);
}

TEST_CASE("pdf equals exp(log_pdf) for every family") {
    for (double x : {-150.0, -40.0, -3.1, 0.0, 0.42, 7.7, 55.0, 210.0}) {
        CHECK(pdf(x, kGauss) == doctest::Approx(std::exp(log_pdf(x, kGauss))).epsilon(1e-12));
        CHECK(pdf(x, kLogi) == doctest::Approx(std::exp(log_pdf(x, kLogi))).epsilon(1e-12));
        CHECK(pdf(x, kBgmm) == doctest::Approx(std::exp(log_pdf(x, kBgmm))).epsilon(1e-12));
        CHECK(pdf(x, kStudent) ==
              doctest::Approx(std::exp(log_pdf(x, kStudent))).epsilon(1e-12));
    }
}

TEST_CASE("densities integrate to one") {
    const auto mass = [](auto model, double lo, double hi) {
        return oracle::integrate([&](double x) { return pdf(x, model); }, lo, hi, 1e-11);
    };
    CHECK(mass(kGauss, 0.33 - 60 * 18.49, 0.33 + 60 * 18.49) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mass(kLogi, 0.42 - 120 * 9.52, 0.42 + 120 * 9.52) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mass(kBgmm, -6.25 - 60 * 47.72, -6.25 + 60 * 47.72) ==
          doctest::Approx(1.0).epsilon(1e-8));
    // heavy student-t tails: +-1000 lambda leaves ~1e-10 outside
    CHECK(mass(kStudent, 0.46 - 1000 * 13.58, 0.46 + 1000 * 13.58) ==
          doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("logistic closed-form values and symmetry") {
    const LogisticModel unit{0.0, 1.0};
    CHECK(pdf(0.0, unit) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(log_pdf(0.0, unit) == doctest::Approx(-std::log(4.0)).epsilon(1e-14));
    CHECK(cdf(0.0, unit) == doctest::Approx(0.5).epsilon(1e-14));
    for (double x : {0.3, 1.7, 5.0, 22.0}) {
        CHECK(pdf(x, unit) == doctest::Approx(pdf(-x, unit)).epsilon(1e-13));
        CHECK(cdf(-x, unit) == doctest::Approx(1.0 - cdf(x, unit)).epsilon(1e-12));
    }
    // location/scale shift
    CHECK(pdf(0.42, kLogi) == doctest::Approx(0.25 / 9.52).epsilon(1e-13));
    CHECK(cdf(0.42, kLogi) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("gaussian cdf against erfc") {
    const GaussianModel unit{0.0, 1.0};
    CHECK(cdf(0.0, unit) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cdf(1.96, unit) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
    CHECK(cdf(-1.0, kGauss) ==
          doctest::Approx(0.5 * std::erfc((0.33 - -1.0) / (18.49 * std::sqrt(2.0))))
              .epsilon(1e-13));
}

TEST_CASE("logistic tails are heavier than a matched gaussian") {
    // same location and same standard deviation
    const double sigma = 9.52 * M_PI / std::sqrt(3.0);
    const GaussianModel matched{0.42, sigma};
    const double x = 0.42 + 8.0 * sigma;
    CHECK(log_pdf(x, kLogi) > log_pdf(x, matched));
}

TEST_CASE("bgmm density is the weighted component sum, stable far out") {
    for (double x : {-80.0, -6.25, 0.82, 30.0, 150.0}) {
        const double direct = 0.93 * pdf(x, GaussianModel{0.82, 13.97}) +
                              0.07 * pdf(x, GaussianModel{-6.25, 47.72});
        CHECK(pdf(x, kBgmm) == doctest::Approx(direct).epsilon(1e-12));
    }
    // far tail: one component underflows, log-sum-exp keeps the log density finite
    const double far = -900.0;
    CHECK(std::isfinite(log_pdf(far, kBgmm)));
    CHECK(log_pdf(far, kBgmm) ==
          doctest::Approx(oracle::bgmm_log_pdf(0.93, 0.82, 13.97, -6.25, 47.72, far))
              .epsilon(1e-10));
}

TEST_CASE("student-t log density against the lgamma formula") {
    for (double x : {-300.0, -20.0, 0.46, 11.0, 500.0}) {
        CHECK(log_pdf(x, kStudent) ==
              doctest::Approx(oracle::student_t_log_pdf(0.46, 13.58, 4.68, x))
                  .epsilon(1e-12));
    }
    // nu = 1 is Cauchy
    const StudentTModel cauchy{0.0, 2.0, 1.0};
    for (double x : {0.0, 1.0, -7.0}) {
        const double z = x / 2.0;
        CHECK(pdf(x, cauchy) ==
              doctest::Approx(1.0 / (M_PI * 2.0 * (1.0 + z * z))).epsilon(1e-12));
    }
}

TEST_CASE("logistic_sample inverts the cdf") {
    for (double u : {1e-12, 0.02, 0.31, 0.5, 0.77, 0.999, 1.0 - 1e-12}) {
        const double x = logistic_sample(u, kLogi);
        CHECK(cdf(x, kLogi) == doctest::Approx(u).epsilon(1e-9));
    }
    CHECK(logistic_sample(0.5, kLogi) == doctest::Approx(0.42).epsilon(1e-13));
    CHECK_THROWS_AS(logistic_sample(0.0, kLogi), InvalidUniform);
    CHECK_THROWS_AS(logistic_sample(1.0, kLogi), InvalidUniform);
    CHECK_THROWS_AS(logistic_sample(-0.1, kLogi), InvalidUniform);
}

TEST_CASE("log_likelihood sums log densities and rejects non-finite samples") {
    const std::vector<double> xs{-3.0, 0.5, 12.0, 40.0};
    double manual = 0.0;
    for (double x : xs) manual += log_pdf(x, kLogi);
    CHECK(log_likelihood(DistributionModel{kLogi}, xs) ==
          doctest::Approx(manual).epsilon(1e-14));

    const std::vector<double> bad{1.0, std::nan(""), 2.0};
    CHECK_THROWS_AS(log_likelihood(DistributionModel{kLogi}, bad), NonFiniteSample);
    const std::vector<double> inf{1.0, HUGE_VAL};
    CHECK_THROWS_AS(log_likelihood(DistributionModel{kGauss}, inf), NonFiniteSample);
}

TEST_CASE("model_stddev and model_scale") {
    CHECK(model_stddev(DistributionModel{kGauss}) == 18.49);
    CHECK(model_scale(DistributionModel{kGauss}) == 18.49);

    CHECK(model_stddev(DistributionModel{kLogi}) ==
          doctest::Approx(9.52 * M_PI / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(model_scale(DistributionModel{kLogi}) == 9.52);

    // mixture pooled moments: E[X] and E[X^2] from the components
    const double mean = 0.93 * 0.82 + 0.07 * -6.25;
    const double second = 0.93 * (13.97 * 13.97 + 0.82 * 0.82) +
                          0.07 * (47.72 * 47.72 + 6.25 * 6.25);
    const double pooled = std::sqrt(second - mean * mean);
    CHECK(model_stddev(DistributionModel{kBgmm}) == doctest::Approx(pooled).epsilon(1e-13));
    CHECK(model_scale(DistributionModel{kBgmm}) == doctest::Approx(pooled).epsilon(1e-13));

    CHECK(model_stddev(DistributionModel{kStudent}) ==
          doctest::Approx(13.58 * std::sqrt(4.68 / 2.68)).epsilon(1e-13));
    CHECK(model_scale(DistributionModel{kStudent}) == 13.58);
    CHECK(std::isinf(model_stddev(DistributionModel{StudentTModel{0.0, 1.0, 2.0}})));
}

TEST_CASE("model type names") {
    CHECK(model_type_name(DistributionModel{kGauss}) == "gaussian");
    CHECK(model_type_name(DistributionModel{kLogi}) == "logistic");
    CHECK(model_type_name(DistributionModel{kBgmm}) == "bgmm");
    CHECK(model_type_name(DistributionModel{kStudent}) == "student_t");
}
