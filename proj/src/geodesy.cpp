#include "rspp/geodesy.hpp"

#include <cmath>

namespace rspp {

namespace {
constexpr double kDeg2Rad = M_PI / 180.0;
constexpr double kRad2Deg = 180.0 / M_PI;
}  // namespace

void validate(const LlhPosition& llh) {
    if (!std::isfinite(llh.latitude_deg) || !std::isfinite(llh.longitude_deg) ||
        !std::isfinite(llh.height_m)) {
        throw ValidationError("geodetic position has non-finite component");
    }
    if (llh.latitude_deg < -90.0 || llh.latitude_deg > 90.0) {
        throw ValidationError("latitude out of [-90, 90] degrees");
    }
    if (llh.longitude_deg < -180.0 || llh.longitude_deg > 180.0) {
        throw ValidationError("longitude out of [-180, 180] degrees");
    }
}

EcefPosition llh_to_ecef(const LlhPosition& llh) {
    const double phi = llh.latitude_deg * kDeg2Rad;
    const double lam = llh.longitude_deg * kDeg2Rad;
    const double sphi = std::sin(phi);
    const double cphi = std::cos(phi);
    // prime-vertical radius of curvature
    const double n = kWgs84SemiMajorAxis / std::sqrt(1.0 - kWgs84EccSq * sphi * sphi);
    return {(n + llh.height_m) * cphi * std::cos(lam),
            (n + llh.height_m) * cphi * std::sin(lam),
            (n * (1.0 - kWgs84EccSq) + llh.height_m) * sphi};
}

LlhPosition ecef_to_llh(const EcefPosition& ecef) {
    if (norm(ecef) < 1.0) {
        throw DegeneratePosition("ECEF point within 1 m of geocenter");
    }
    const double p = std::hypot(ecef.x, ecef.y);
    const double lon = (p > 0.0) ? std::atan2(ecef.y, ecef.x) : 0.0;

    // Near the rotation axis the latitude is +-90 and height comes from |z|.
    if (p < 1e-6 * kWgs84SemiMajorAxis) {
        const double lat = (ecef.z >= 0.0) ? 90.0 : -90.0;
        return {lat, lon * kRad2Deg, std::abs(ecef.z) - kWgs84SemiMinorAxis};
    }

    // Fixed-point iteration on the geodetic latitude; converges in a handful
    // of steps anywhere outside the core. The height uses
    // h = p cos(lat) + z sin(lat) - a w, w = sqrt(1 - e^2 sin^2 lat), which
    // stays well conditioned at all latitudes (no 1/cos blow-up at the poles).
    double lat = std::atan2(ecef.z, p * (1.0 - kWgs84EccSq));
    double h = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double sphi = std::sin(lat);
        const double w = std::sqrt(1.0 - kWgs84EccSq * sphi * sphi);
        const double n = kWgs84SemiMajorAxis / w;
        h = p * std::cos(lat) + ecef.z * sphi - kWgs84SemiMajorAxis * w;
        const double lat_next = std::atan2(ecef.z, p * (1.0 - kWgs84EccSq * n / (n + h)));
        const double dlat = std::abs(lat_next - lat);
        lat = lat_next;
        if (dlat < 1e-15) break;
    }
    return {lat * kRad2Deg, lon * kRad2Deg, h};
}

EnuBasis enu_basis(const LlhPosition& llh) {
    const double phi = llh.latitude_deg * kDeg2Rad;
    const double lam = llh.longitude_deg * kDeg2Rad;
    const double sphi = std::sin(phi), cphi = std::cos(phi);
    const double slam = std::sin(lam), clam = std::cos(lam);
    EnuBasis basis;
    basis.east = {-slam, clam, 0.0};
    basis.north = {-sphi * clam, -sphi * slam, cphi};
    basis.up = {cphi * clam, cphi * slam, sphi};
    return basis;
}

double elevation_deg(const EcefPosition& origin, const EcefPosition& target) {
    const EnuBasis basis = enu_basis(ecef_to_llh(origin));
    const EcefPosition d = target - origin;
    const double r = norm(d);
    if (r == 0.0) {
        throw DegenerateGeometry("elevation undefined for coincident points");
    }
    return std::asin(dot(d, basis.up) / r) * kRad2Deg;
}

}  // namespace rspp
