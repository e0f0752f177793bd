#include "tclf/synth.hpp"

#include <cmath>
#include <cstdio>

#include "tclf/errors.hpp"
#include "tclf/geo.hpp"
#include "tclf/rng.hpp"

namespace tclf {
namespace {

constexpr double kDegToRad = M_PI / 180.0;

// Synthetic coastline: a gently curved northern boundary of the basin.
double coast_lat(double lon_deg) {
    return 16.5 + 2.0 * std::sin((lon_deg - 80.0) * M_PI / 14.0);
}

GeoPoint step_towards(const GeoPoint& from, double bearing_deg, double distance_km) {
    const double delta = distance_km / kEarthRadiusKm;
    const double theta = bearing_deg * kDegToRad;
    const double phi1 = from.latitude_deg * kDegToRad;
    const double lambda1 = from.longitude_deg * kDegToRad;
    const double phi2 = std::asin(std::sin(phi1) * std::cos(delta) +
                                  std::cos(phi1) * std::sin(delta) * std::cos(theta));
    const double lambda2 =
        lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                             std::cos(delta) - std::sin(phi1) * std::sin(phi2));
    return {phi2 / kDegToRad, wrap_longitude_deg(lambda2 / kDegToRad)};
}

double sst_field(double lat_deg, double lon_deg) {
    return 29.5 - 0.18 * (lat_deg - 5.0) + 0.8 * std::sin((lon_deg - 80.0) * M_PI / 20.0);
}

struct PathParams {
    GeoPoint start;
    double bearing0;
    double curvature;     // degrees of bearing drift per step
    double step_km;       // mean translation per 3 h
    double step_wobble;   // amplitude of the speed modulation
    double wobble_period;
    double peak_frac;     // where in the track the intensity peaks
    double wind_amp;
    double wind_base;
};

PathParams draw_params(Rng& rng) {
    PathParams p;
    p.start = {rng.uniform(6.0, 13.0), rng.uniform(80.0, 94.0)};
    p.bearing0 = rng.uniform(-50.0, 45.0);  // relative to due north
    p.curvature = rng.uniform(-0.8, 1.2);
    p.step_km = rng.uniform(18.0, 46.0);
    p.step_wobble = rng.uniform(0.0, 8.0);
    p.wobble_period = rng.uniform(8.0, 20.0);
    p.peak_frac = rng.uniform(0.4, 0.9);
    p.wind_amp = rng.uniform(25.0, 115.0);
    p.wind_base = rng.uniform(12.0, 20.0);
    return p;
}

// Walks until the path crosses the coastline; returns positions up to and
// including the crossing point. Empty result means the draw was unusable.
std::vector<GeoPoint> walk_to_coast(const PathParams& p) {
    constexpr int kMaxSteps = 60;
    constexpr int kMinSteps = 12;
    std::vector<GeoPoint> path{p.start};
    GeoPoint cur = p.start;
    for (int s = 1; s < kMaxSteps; ++s) {
        const double bearing =
            std::fmod(360.0 + p.bearing0 + p.curvature * s, 360.0);
        const double km =
            std::max(8.0, p.step_km + p.step_wobble * std::sin(s / p.wobble_period * 2.0 * M_PI));
        cur = step_towards(cur, bearing, km);
        path.push_back(cur);
        if (cur.latitude_deg >= coast_lat(cur.longitude_deg)) {
            if (static_cast<int>(path.size()) < kMinSteps) return {};
            return path;
        }
    }
    return {};  // never reached the coast
}

}  // namespace

std::vector<RawRecord> synth_best_track(const SynthOptions& options) {
    if (options.n_cyclones < 1)
        throw InvalidInput("synth: n_cyclones must be >= 1, got " +
                           std::to_string(options.n_cyclones));

    Rng rng(options.seed);
    std::vector<RawRecord> records;
    const UnixTime base_time = parse_iso8601("2015-05-01T00:00:00Z");

    for (int i = 0; i < options.n_cyclones; ++i) {
        std::vector<GeoPoint> path;
        PathParams params{};
        for (int attempt = 0; attempt < 256 && path.empty(); ++attempt) {
            params = draw_params(rng);
            path = walk_to_coast(params);
        }
        if (path.empty()) throw Error("synth: could not draw a landfalling path");

        char id[16];
        std::snprintf(id, sizeof(id), "SYN-%03d", i + 1);
        const UnixTime start = base_time + static_cast<UnixTime>(i) * 5 * 86400;
        const int t_l = static_cast<int>(path.size());
        const double peak = params.peak_frac * t_l;
        const double width = 0.45 * t_l;

        const int total = t_l + options.post_landfall_rows;
        GeoPoint pos = path[0];
        for (int s = 0; s < total; ++s) {
            if (s < t_l) {
                pos = path[s];
            } else {
                // Over-land continuation keeps the last heading.
                pos = step_towards(
                    pos, std::fmod(360.0 + params.bearing0 + params.curvature * s, 360.0),
                    params.step_km);
            }
            const double hump = std::exp(-std::pow((s - peak) / width, 2.0));
            const double msws =
                std::min(140.0, std::max(10.0, params.wind_base + params.wind_amp * hump));
            RawRecord r;
            r.cyclone_id = id;
            r.timestamp = start + static_cast<UnixTime>(s) * kRecordIntervalHours * 3600;
            r.lat_deg = pos.latitude_deg;
            r.lon_deg = pos.longitude_deg;
            r.msws_kt = msws;
            r.ecp_hpa = 1012.0 - 0.6 * (msws - 10.0);
            r.sst_c = sst_field(pos.latitude_deg, pos.longitude_deg);
            r.landfall = (s == t_l - 1);
            records.push_back(std::move(r));
        }
    }
    return records;
}

}  // namespace tclf
