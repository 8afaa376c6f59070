#include <doctest.h>

#include <cmath>

#include "rspp/estimators.hpp"
#include "support/oracles.hpp"

using namespace rspp;

TEST_CASE("estimator names round trip") {
    CHECK(to_string(EstimatorKind::Ls) == "ls");
    CHECK(to_string(EstimatorKind::Lqlc) == "lqlc");
    CHECK(estimator_from_string("ls") == EstimatorKind::Ls);
    CHECK(estimator_from_string("lqlc") == EstimatorKind::Lqlc);
    CHECK_THROWS_AS(estimator_from_string("huber"), ParseError);
}

TEST_CASE("least-squares calculus is quadratic") {
    for (double r : {-31.0, -2.0, -1e-6, 0.0, 0.5, 4.0, 47.0}) {
        CHECK(cost(EstimatorKind::Ls, r) == 0.5 * r * r);
        CHECK(influence(EstimatorKind::Ls, r) == r);
        CHECK(weight(EstimatorKind::Ls, r) == 1.0);
    }
}

TEST_CASE("logistic-cost values against long-double references") {
    CHECK(cost(EstimatorKind::Lqlc, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

    const auto reference = [](long double r) {
        return static_cast<double>(std::log(std::cosh(r) + 1.0L));
    };
    for (double r : {0.37, 1.0, 5.0, 10.0, 25.0, 29.9}) {
        CHECK(cost(EstimatorKind::Lqlc, r) == doctest::Approx(reference(r)).epsilon(1e-13));
        CHECK(cost(EstimatorKind::Lqlc, -r) == cost(EstimatorKind::Lqlc, r));
    }
    // the r = 10 value, pinned to more digits than its usual 6-decimal rounding
    CHECK(cost(EstimatorKind::Lqlc, 10.0) ==
          doctest::Approx(9.3069436172384884).epsilon(1e-13));
}

TEST_CASE("logistic-cost tail branch is continuous and overflow-free") {
    const auto reference = [](long double r) {
        return static_cast<double>(std::log(std::cosh(r) + 1.0L));
    };
    // both sides of the |r| = 30 switch agree with the reference
    for (double r : {29.999999, 30.0, 30.000001, 35.0}) {
        CHECK(cost(EstimatorKind::Lqlc, r) == doctest::Approx(reference(r)).epsilon(1e-13));
    }
    // far past where cosh overflows, the cost tracks |r| - ln 2
    for (double r : {800.0, 1e7, 1e300}) {
        const double c = cost(EstimatorKind::Lqlc, r);
        CHECK(std::isfinite(c));
        CHECK(c == doctest::Approx(r - std::log(2.0)).epsilon(1e-14));
    }
}

TEST_CASE("logistic influence is tanh(r/2), saturating") {
    for (double r : {-40.0, -3.0, -0.2, 1e-9, 0.7, 12.0, 500.0}) {
        CHECK(influence(EstimatorKind::Lqlc, r) ==
              doctest::Approx(std::tanh(0.5 * r)).epsilon(1e-12));
    }
    CHECK(influence(EstimatorKind::Lqlc, 0.0) == 0.0);
    CHECK(std::fabs(influence(EstimatorKind::Lqlc, 1e9)) <= 1.0);
    CHECK(std::fabs(influence(EstimatorKind::Lqlc, -1e9)) <= 1.0);
}

TEST_CASE("influence matches a finite-difference derivative of cost") {
    for (EstimatorKind kind : {EstimatorKind::Ls, EstimatorKind::Lqlc}) {
        for (double r = -48.0; r <= 48.0; r += 1.37) {
            const double fd = oracle::derivative(
                [kind](double x) { return cost(kind, x); }, r, 1e-4);
            CHECK(influence(kind, r) == doctest::Approx(fd).epsilon(1e-9));
        }
    }
}

TEST_CASE("weight shape: half at zero, even, positive, non-increasing") {
    CHECK(weight(EstimatorKind::Lqlc, 0.0) == 0.5);
    double prev = weight(EstimatorKind::Lqlc, 0.0);
    for (double r = 0.01; r <= 60.0; r += 0.01) {
        const double w = weight(EstimatorKind::Lqlc, r);
        CHECK(w > 0.0);
        CHECK(w <= 0.5);
        CHECK(w <= prev + 1e-18);
        // bitwise even symmetry
        CHECK(w == weight(EstimatorKind::Lqlc, -r));
        prev = w;
    }
}

TEST_CASE("weight series branch matches the quotient at the crossover") {
    // |r| < 1e-4 uses 1/2 - r^2/24; both forms agree to ~1e-17 there
    for (double r : {1e-7, 5e-5, 9.9e-5, 1.0e-4, 1.1e-4, 1e-3}) {
        const double series = 0.5 - r * r / 24.0;
        const double quotient = std::tanh(0.5 * r) / r;
        CHECK(weight(EstimatorKind::Lqlc, r) == doctest::Approx(series).epsilon(1e-12));
        CHECK(weight(EstimatorKind::Lqlc, r) == doctest::Approx(quotient).epsilon(1e-12));
    }
}

TEST_CASE("weight times residual reproduces influence bitwise") {
    for (EstimatorKind kind : {EstimatorKind::Ls, EstimatorKind::Lqlc}) {
        for (double r = -50.0; r <= 50.0; r += 0.01) {
            CHECK(weight(kind, r) * r == influence(kind, r));
        }
    }
}
