#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "rspp/geodesy.hpp"

namespace rspp {

enum class Constellation { Gps, Bds };

std::string to_string(Constellation c);
Constellation constellation_from_string(const std::string& s);  // throws ParseError

/// One pseudorange measurement. `scale` is the dispersion assigned to the
/// measurement error (meters); residuals are normalized by it before any
/// reweighting.
struct SatelliteObservation {
    std::string sat_id;
    Constellation constellation = Constellation::Gps;
    EcefPosition sat_pos;
    double pseudorange = 0.0;  // [m]
    double scale = 1.0;        // [m], > 0
};

struct EpochObservations {
    int epoch_index = 0;
    std::vector<SatelliteObservation> observations;

    /// Distinct constellations present, in fixed (Gps, Bds) order.
    std::vector<Constellation> constellations() const;
    /// 3 position states + one clock bias per constellation present.
    int state_dimension() const;
};

/// Throws ValidationError / InsufficientObservations when the epoch violates
/// its schema (positive finite scales, n >= state_dimension). Solving needs
/// one extra observation of redundancy on top of this.
void validate(const EpochObservations& epoch);

/// Receiver position plus one clock bias per constellation (meters).
struct StateEstimate {
    EcefPosition position;
    std::map<Constellation, double> clock_bias;
};

/// Geometric range + the clock bias of the observation's constellation.
/// Throws MissingClockBias when the state lacks that constellation.
double predict_pseudorange(const SatelliteObservation& obs, const StateEstimate& state);

/// Residual vector, design matrix and per-row scales of the first-order
/// expansion around `nominal`. Column layout: [x y z | clock biases in
/// clock_order].
struct LinearizedSystem {
    Eigen::VectorXd y;       // prefit residuals, observed - predicted [m]
    Eigen::MatrixXd H;       // n x (3 + C)
    Eigen::VectorXd scales;  // per-row dispersion [m]
    StateEstimate nominal;   // expansion point
    std::vector<Constellation> clock_order;
};

/// Throws InsufficientObservations (n < d + 1), MissingClockBias, or
/// DegenerateGeometry (a satellite within 1 m of the nominal position).
LinearizedSystem build_linear_system(const EpochObservations& epoch,
                                     const StateEstimate& nominal);

/// state += dx with the column layout of build_linear_system.
void apply_increment(StateEstimate& state, const Eigen::VectorXd& dx,
                     const std::vector<Constellation>& clock_order);

}  // namespace rspp
