#include "rspp/model.hpp"

#include <cmath>

#include "rspp/errors.hpp"

namespace rspp {

std::string to_string(Constellation c) {
    switch (c) {
        case Constellation::Gps: return "GPS";
        case Constellation::Bds: return "BDS";
    }
    throw ValidationError("unknown constellation enum value");
}

Constellation constellation_from_string(const std::string& s) {
    if (s == "GPS") return Constellation::Gps;
    if (s == "BDS") return Constellation::Bds;
    throw ParseError("unknown constellation '" + s + "' (expected GPS or BDS)");
}

std::vector<Constellation> EpochObservations::constellations() const {
    bool has[2] = {false, false};
    for (const auto& obs : observations) has[static_cast<int>(obs.constellation)] = true;
    std::vector<Constellation> out;
    if (has[0]) out.push_back(Constellation::Gps);
    if (has[1]) out.push_back(Constellation::Bds);
    return out;
}

int EpochObservations::state_dimension() const {
    return 3 + static_cast<int>(constellations().size());
}

void validate(const EpochObservations& epoch) {
    for (const auto& obs : epoch.observations) {
        if (!(obs.scale > 0.0) || !std::isfinite(obs.scale)) {
            throw ValidationError("observation " + obs.sat_id +
                                  ": scale must be positive and finite");
        }
        if (!std::isfinite(obs.pseudorange) || !std::isfinite(obs.sat_pos.x) ||
            !std::isfinite(obs.sat_pos.y) || !std::isfinite(obs.sat_pos.z)) {
            throw ValidationError("observation " + obs.sat_id + ": non-finite field");
        }
        if (!(obs.pseudorange > 0.0)) {
            throw ValidationError("observation " + obs.sat_id + ": pseudorange must be > 0");
        }
    }
    const int d = epoch.state_dimension();
    if (static_cast<int>(epoch.observations.size()) < d) {
        throw InsufficientObservations(
            "epoch " + std::to_string(epoch.epoch_index) + ": " +
            std::to_string(epoch.observations.size()) + " observations for " +
            std::to_string(d) + " unknowns");
    }
}

double predict_pseudorange(const SatelliteObservation& obs, const StateEstimate& state) {
    const auto it = state.clock_bias.find(obs.constellation);
    if (it == state.clock_bias.end()) {
        throw MissingClockBias("state has no clock bias for " + to_string(obs.constellation));
    }
    return norm(obs.sat_pos - state.position) + it->second;
}

LinearizedSystem build_linear_system(const EpochObservations& epoch,
                                     const StateEstimate& nominal) {
    const auto n = static_cast<Eigen::Index>(epoch.observations.size());
    LinearizedSystem sys;
    sys.clock_order = epoch.constellations();
    const auto d = static_cast<Eigen::Index>(3 + sys.clock_order.size());
    if (n < d + 1) {
        throw InsufficientObservations("epoch " + std::to_string(epoch.epoch_index) + ": " +
                                       std::to_string(n) + " observations for " +
                                       std::to_string(d) + " unknowns");
    }

    sys.nominal = nominal;
    sys.y.resize(n);
    sys.H.setZero(n, d);
    sys.scales.resize(n);

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& obs = epoch.observations[static_cast<std::size_t>(i)];
        const EcefPosition los = obs.sat_pos - nominal.position;
        const double range = norm(los);
        if (range < 1.0) {
            throw DegenerateGeometry("satellite " + obs.sat_id +
                                     " coincides with linearization point");
        }
        sys.y(i) = obs.pseudorange - predict_pseudorange(obs, nominal);
        // d(range)/d(pos) = -unit line-of-sight
        sys.H(i, 0) = -los.x / range;
        sys.H(i, 1) = -los.y / range;
        sys.H(i, 2) = -los.z / range;
        for (std::size_t j = 0; j < sys.clock_order.size(); ++j) {
            if (sys.clock_order[j] == obs.constellation) {
                sys.H(i, 3 + static_cast<Eigen::Index>(j)) = 1.0;
            }
        }
        sys.scales(i) = obs.scale;
    }
    return sys;
}

void apply_increment(StateEstimate& state, const Eigen::VectorXd& dx,
                     const std::vector<Constellation>& clock_order) {
    state.position.x += dx(0);
    state.position.y += dx(1);
    state.position.z += dx(2);
    for (std::size_t j = 0; j < clock_order.size(); ++j) {
        state.clock_bias[clock_order[j]] += dx(3 + static_cast<Eigen::Index>(j));
    }
}

}  // namespace rspp
