#include "tclf/geo.hpp"

#include <cmath>
#include <string>

#include "tclf/errors.hpp"

namespace tclf {
namespace {

constexpr double kDegToRad = M_PI / 180.0;

}  // namespace

void validate_geo_point(const GeoPoint& p) {
    if (!std::isfinite(p.latitude_deg) || !std::isfinite(p.longitude_deg))
        throw InvalidInput("non-finite coordinate (" + std::to_string(p.latitude_deg) +
                           ", " + std::to_string(p.longitude_deg) + ")");
    if (p.latitude_deg < -90.0 || p.latitude_deg > 90.0)
        throw InvalidInput("latitude out of [-90, 90]: " + std::to_string(p.latitude_deg));
    if (p.longitude_deg < -180.0 || p.longitude_deg > 180.0)
        throw InvalidInput("longitude out of [-180, 180]: " + std::to_string(p.longitude_deg));
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    validate_geo_point(a);
    validate_geo_point(b);
    const double phi1 = a.latitude_deg * kDegToRad;
    const double phi2 = b.latitude_deg * kDegToRad;
    const double dphi = (b.latitude_deg - a.latitude_deg) * kDegToRad;
    const double dlambda = (b.longitude_deg - a.longitude_deg) * kDegToRad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    const double c = 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
    return kEarthRadiusKm * c;
}

double initial_bearing_deg(const GeoPoint& a, const GeoPoint& b) {
    validate_geo_point(a);
    validate_geo_point(b);
    if (a.latitude_deg == b.latitude_deg && a.longitude_deg == b.longitude_deg)
        return 0.0;
    const double phi1 = a.latitude_deg * kDegToRad;
    const double phi2 = b.latitude_deg * kDegToRad;
    const double dlambda = (b.longitude_deg - a.longitude_deg) * kDegToRad;
    const double y = std::sin(dlambda) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) -
                     std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
    double bearing = std::atan2(y, x) / kDegToRad;
    bearing = std::fmod(bearing + 360.0, 360.0);
    // fmod can return 360.0 when bearing underflows to -0; normalize.
    if (bearing >= 360.0) bearing = 0.0;
    return bearing;
}

double wrap_longitude_deg(double lon_deg) {
    double w = std::fmod(lon_deg + 180.0, 360.0);
    if (w < 0) w += 360.0;
    return w - 180.0;
}

double clamp_latitude_deg(double lat_deg) {
    if (lat_deg < -90.0) return -90.0;
    if (lat_deg > 90.0) return 90.0;
    return lat_deg;
}

}  // namespace tclf
