#ifndef TCLF_TRACK_HPP
#define TCLF_TRACK_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tclf/timeutil.hpp"

namespace tclf {

inline constexpr int kRecordIntervalHours = 3;
inline constexpr int kNumFeatures = 7;

// Canonical feature order of one observation vector:
// (msws, ecp, sst, distance, direction, latitude, longitude).
inline constexpr std::array<const char*, kNumFeatures> kFeatureNames = {
    "msws_kt", "ecp_hpa", "sst_c", "distance_km",
    "direction_deg", "lat_deg", "lon_deg"};

// One 3-hourly observation of a cyclone, after cleaning. distance/direction
// describe the motion since the previous point; the first point of a track
// carries (0, 0).
struct TrackPoint {
    double t_hours = 0.0;  // hours since track start, multiple of 3
    double msws_kt = 0.0;
    double ecp_hpa = 0.0;
    double sst_c = 0.0;
    double distance_km = 0.0;
    double direction_deg = 0.0;
    double lat_deg = 0.0;
    double lon_deg = 0.0;

    std::array<double, kNumFeatures> features() const {
        return {msws_kt, ecp_hpa, sst_c, distance_km, direction_deg, lat_deg, lon_deg};
    }
};

// A cleaned cyclone history: gap-free 3-hourly points ending at the landfall
// observation.
struct CycloneTrack {
    std::string cyclone_id;
    UnixTime start_time = 0;
    std::vector<TrackPoint> points;

    // Position of the landfall observation; always the last point.
    std::size_t landfall_index() const { return points.empty() ? 0 : points.size() - 1; }
    std::size_t size() const { return points.size(); }
    const TrackPoint& landfall() const { return points.back(); }
};

}  // namespace tclf

#endif
