#include <doctest.h>

#include <cmath>

#include "rspp/model.hpp"

using namespace rspp;

namespace {

// receiver on the ellipsoid plus four GPS / two BDS satellites at ~21000 km
// in distinct directions; plain numbers, no special geometry
const EcefPosition kRx{-2418e3, 5385e3, 2405e3};

SatelliteObservation make_obs(const std::string& id, Constellation c, EcefPosition dir,
                              double range, double bias) {
    const double n = norm(dir);
    const EcefPosition sat = kRx + EcefPosition{dir.x / n * range, dir.y / n * range,
                                                dir.z / n * range};
    return {id, c, sat, range + bias, 1.0};
}

EpochObservations dual_epoch(double gps_bias = 152.4, double bds_bias = 238.7) {
    EpochObservations epoch;
    epoch.epoch_index = 7;
    epoch.observations = {
        make_obs("G01", Constellation::Gps, {1.0, 0.2, 0.5}, 20.2e6, gps_bias),
        make_obs("G02", Constellation::Gps, {-0.4, 1.0, 0.3}, 21.5e6, gps_bias),
        make_obs("G03", Constellation::Gps, {0.1, -0.8, 1.0}, 22.8e6, gps_bias),
        make_obs("G04", Constellation::Gps, {-1.0, -0.3, 0.8}, 23.1e6, gps_bias),
        make_obs("C01", Constellation::Bds, {0.7, 0.7, -0.2}, 21.9e6, bds_bias),
        make_obs("C02", Constellation::Bds, {-0.5, 0.4, -1.0}, 24.0e6, bds_bias),
    };
    return epoch;
}

StateEstimate truth_state() {
    return {kRx, {{Constellation::Gps, 152.4}, {Constellation::Bds, 238.7}}};
}

}  // namespace

TEST_CASE("constellation names round trip") {
    CHECK(to_string(Constellation::Gps) == "GPS");
    CHECK(to_string(Constellation::Bds) == "BDS");
    CHECK(constellation_from_string("GPS") == Constellation::Gps);
    CHECK(constellation_from_string("BDS") == Constellation::Bds);
    CHECK_THROWS_AS(constellation_from_string("GLO"), ParseError);
}

TEST_CASE("constellations() reports fixed order and state dimension counts biases") {
    EpochObservations epoch;
    epoch.observations = {
        make_obs("C01", Constellation::Bds, {0.7, 0.7, -0.2}, 21.9e6, 0.0),
        make_obs("G01", Constellation::Gps, {1.0, 0.2, 0.5}, 20.2e6, 0.0),
    };
    // Bds listed first in the data, but the order is fixed (Gps, Bds)
    const auto cs = epoch.constellations();
    REQUIRE(cs.size() == 2);
    CHECK(cs[0] == Constellation::Gps);
    CHECK(cs[1] == Constellation::Bds);
    CHECK(epoch.state_dimension() == 5);

    EpochObservations gps_only;
    gps_only.observations = {make_obs("G01", Constellation::Gps, {1, 0, 0}, 2e7, 0.0)};
    CHECK(gps_only.state_dimension() == 4);
}

TEST_CASE("epoch validation") {
    CHECK_NOTHROW(validate(dual_epoch()));

    EpochObservations bad_scale = dual_epoch();
    bad_scale.observations[2].scale = 0.0;
    CHECK_THROWS_AS(validate(bad_scale), ValidationError);

    EpochObservations nan_range = dual_epoch();
    nan_range.observations[0].pseudorange = std::nan("");
    CHECK_THROWS_AS(validate(nan_range), ValidationError);

    EpochObservations negative_range = dual_epoch();
    negative_range.observations[0].pseudorange = -5.0;
    CHECK_THROWS_AS(validate(negative_range), ValidationError);

    // 4 observations across two constellations: below the 5 unknowns
    EpochObservations thin = dual_epoch();
    thin.observations.resize(4);
    thin.observations[3] = make_obs("C01", Constellation::Bds, {0.7, 0.7, -0.2}, 21.9e6, 0.0);
    CHECK_THROWS_AS(validate(thin), InsufficientObservations);
}

TEST_CASE("predict_pseudorange is range plus the constellation bias") {
    StateEstimate state;
    state.position = {100.0, -200.0, 50.0};
    state.clock_bias[Constellation::Gps] = 152.4;

    SatelliteObservation obs;
    obs.constellation = Constellation::Gps;
    obs.sat_pos = state.position + EcefPosition{300.0, 400.0, 0.0};  // range 500
    CHECK(predict_pseudorange(obs, state) == doctest::Approx(652.4).epsilon(1e-12));

    obs.constellation = Constellation::Bds;
    CHECK_THROWS_AS(predict_pseudorange(obs, state), MissingClockBias);
}

TEST_CASE("build_linear_system rows are [-los | one-hot bias]") {
    const EpochObservations epoch = dual_epoch();
    const StateEstimate nominal = truth_state();
    const LinearizedSystem sys = build_linear_system(epoch, nominal);

    REQUIRE(sys.H.rows() == 6);
    REQUIRE(sys.H.cols() == 5);
    REQUIRE(sys.clock_order.size() == 2);
    CHECK(sys.clock_order[0] == Constellation::Gps);
    CHECK(sys.clock_order[1] == Constellation::Bds);
    CHECK(sys.nominal.position.x == nominal.position.x);

    for (int i = 0; i < 6; ++i) {
        const auto& obs = epoch.observations[static_cast<std::size_t>(i)];
        const EcefPosition diff = obs.sat_pos - nominal.position;
        const double range = norm(diff);
        CHECK(sys.H(i, 0) == doctest::Approx(-diff.x / range).epsilon(1e-12));
        CHECK(sys.H(i, 1) == doctest::Approx(-diff.y / range).epsilon(1e-12));
        CHECK(sys.H(i, 2) == doctest::Approx(-diff.z / range).epsilon(1e-12));
        const bool gps = obs.constellation == Constellation::Gps;
        CHECK(sys.H(i, 3) == (gps ? 1.0 : 0.0));
        CHECK(sys.H(i, 4) == (gps ? 0.0 : 1.0));
        CHECK(sys.y(i) ==
              doctest::Approx(obs.pseudorange - predict_pseudorange(obs, nominal))
                  .epsilon(1e-12));
        CHECK(sys.scales(i) == obs.scale);
    }

    // at the generating state the prefit residuals vanish
    CHECK(sys.y.lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("design matrix matches a finite-difference jacobian") {
    const EpochObservations epoch = dual_epoch();
    StateEstimate nominal = truth_state();
    nominal.position.x += 37.0;  // linearize away from the truth
    nominal.clock_bias[Constellation::Gps] -= 3.0;
    const LinearizedSystem sys = build_linear_system(epoch, nominal);

    const double h = 1e-2;
    for (std::size_t i = 0; i < epoch.observations.size(); ++i) {
        const auto& obs = epoch.observations[i];
        for (int j = 0; j < 5; ++j) {
            StateEstimate up = nominal, down = nominal;
            Eigen::VectorXd e = Eigen::VectorXd::Zero(5);
            e(j) = h;
            apply_increment(up, e, sys.clock_order);
            e(j) = -h;
            apply_increment(down, e, sys.clock_order);
            const double fd =
                (predict_pseudorange(obs, up) - predict_pseudorange(obs, down)) / (2.0 * h);
            CHECK(sys.H(static_cast<int>(i), j) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("build_linear_system failure modes") {
    // exactly d observations: enough for the schema, not for a solve
    EpochObservations thin = dual_epoch();
    thin.observations.resize(5);
    CHECK_NOTHROW(validate(thin));
    CHECK_THROWS_AS(build_linear_system(thin, truth_state()), InsufficientObservations);

    EpochObservations coincident = dual_epoch();
    coincident.observations[1].sat_pos = truth_state().position;
    CHECK_THROWS_AS(build_linear_system(coincident, truth_state()), DegenerateGeometry);

    StateEstimate no_bds = truth_state();
    no_bds.clock_bias.erase(Constellation::Bds);
    CHECK_THROWS_AS(build_linear_system(dual_epoch(), no_bds), MissingClockBias);
}

TEST_CASE("apply_increment respects the column layout") {
    StateEstimate state = truth_state();
    Eigen::VectorXd dx(5);
    dx << 1.0, -2.0, 3.0, 0.5, -0.25;
    apply_increment(state, dx, {Constellation::Gps, Constellation::Bds});
    CHECK(state.position.x == kRx.x + 1.0);
    CHECK(state.position.y == kRx.y - 2.0);
    CHECK(state.position.z == kRx.z + 3.0);
    CHECK(state.clock_bias[Constellation::Gps] == doctest::Approx(152.9));
    CHECK(state.clock_bias[Constellation::Bds] == doctest::Approx(238.45));
}
