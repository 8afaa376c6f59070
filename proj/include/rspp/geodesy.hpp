#pragma once

#include <cmath>

#include "rspp/errors.hpp"

namespace rspp {

// WGS-84 ellipsoid
inline constexpr double kWgs84SemiMajorAxis = 6378137.0;            // a [m]
inline constexpr double kWgs84Flattening = 1.0 / 298.257223563;     // f
inline constexpr double kWgs84SemiMinorAxis =
    kWgs84SemiMajorAxis * (1.0 - kWgs84Flattening);                 // b [m]
inline constexpr double kWgs84EccSq =
    kWgs84Flattening * (2.0 - kWgs84Flattening);                    // e^2

/// Earth-centred Earth-fixed cartesian position, meters.
struct EcefPosition {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline EcefPosition operator-(const EcefPosition& a, const EcefPosition& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

inline EcefPosition operator+(const EcefPosition& a, const EcefPosition& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

inline double dot(const EcefPosition& a, const EcefPosition& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(const EcefPosition& p) { return std::sqrt(dot(p, p)); }

/// Geodetic position on the WGS-84 ellipsoid. Degrees / meters.
struct LlhPosition {
    double latitude_deg = 0.0;   // [-90, 90]
    double longitude_deg = 0.0;  // [-180, 180]
    double height_m = 0.0;
};

/// Throws ValidationError unless latitude/longitude are in range and all
/// fields are finite.
void validate(const LlhPosition& llh);

/// Geodetic -> ECEF, closed form.
EcefPosition llh_to_ecef(const LlhPosition& llh);

/// ECEF -> geodetic, iterative (converges to < 1e-6 m for terrestrial and
/// orbital points). Throws DegeneratePosition when |p| < 1 m.
LlhPosition ecef_to_llh(const EcefPosition& ecef);

/// Local east/north/up unit vectors (ECEF frame) at a geodetic point.
struct EnuBasis {
    EcefPosition east;
    EcefPosition north;
    EcefPosition up;
};

EnuBasis enu_basis(const LlhPosition& llh);

/// Elevation angle of `target` as seen from `origin`, degrees above the
/// local horizon.
double elevation_deg(const EcefPosition& origin, const EcefPosition& target);

}  // namespace rspp
