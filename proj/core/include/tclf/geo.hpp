#ifndef TCLF_GEO_HPP
#define TCLF_GEO_HPP

namespace tclf {

// IUGG mean Earth radius, kilometers.
inline constexpr double kEarthRadiusKm = 6371.0088;

struct GeoPoint {
    double latitude_deg;
    double longitude_deg;
};

// Throws InvalidInput unless both coordinates are finite, |lat| <= 90 and
// |lon| <= 180.
void validate_geo_point(const GeoPoint& p);

// Great-circle distance via the haversine formula. Symmetric, non-negative,
// bounded by pi * R.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

// Forward azimuth from a to b in [0, 360). Coincident points give 0 by
// convention so that a stationary step yields (distance 0, direction 0).
double initial_bearing_deg(const GeoPoint& a, const GeoPoint& b);

// Maps any finite longitude into [-180, 180].
double wrap_longitude_deg(double lon_deg);

// Clamps into [-90, 90]; used to sanitize model outputs before geometry.
double clamp_latitude_deg(double lat_deg);

}  // namespace tclf

#endif
