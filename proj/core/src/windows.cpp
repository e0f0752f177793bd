#include "tclf/windows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "tclf/errors.hpp"

namespace tclf {

std::vector<WindowSample> make_windows(const CycloneTrack& track, int window_length) {
    if (window_length < 2)
        throw InvalidInput("make_windows: window length must be >= 2, got " +
                           std::to_string(window_length));
    const int t_l = static_cast<int>(track.size());
    std::vector<WindowSample> out;
    if (t_l < window_length) return out;

    const TrackPoint& landfall = track.landfall();
    const int count = t_l - window_length + 1;
    out.reserve(count);
    for (int k = 1; k <= count; ++k) {
        WindowSample s;
        s.cyclone_id = track.cyclone_id;
        s.k = k;
        s.x.resize(window_length, kNumFeatures);
        for (int r = 0; r < window_length; ++r) {
            const auto f = track.points[k - 1 + r].features();
            for (int c = 0; c < kNumFeatures; ++c) s.x(r, c) = f[c];
        }
        if (!s.x.allFinite())
            throw InvalidInput("make_windows: non-finite feature in track " + track.cyclone_id);
        s.y.msws_kt = landfall.msws_kt;
        s.y.lat_deg = landfall.lat_deg;
        s.y.lon_deg = landfall.lon_deg;
        s.y.hours_to_landfall =
            static_cast<double>(kRecordIntervalHours) * (t_l - (k + window_length - 1));
        out.push_back(std::move(s));
    }
    return out;
}

Eigen::MatrixXd feature_rows(const std::vector<WindowSample>& samples) {
    if (samples.empty()) return Eigen::MatrixXd(0, kNumFeatures);
    const Eigen::Index t = samples.front().x.rows();
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(samples.size()) * t, kNumFeatures);
    Eigen::Index at = 0;
    for (const auto& s : samples) {
        rows.middleRows(at, t) = s.x;
        at += t;
    }
    return rows;
}

Dataset build_dataset(const std::vector<CycloneTrack>& tracks, int window_length,
                      const std::set<std::string>& holdout_ids,
                      std::vector<CycloneTrack>* holdout_out, BuildReport* report) {
    Dataset ds;
    ds.window_length = window_length;
    std::set<std::string> seen_holdouts;

    std::vector<const CycloneTrack*> ordered;
    ordered.reserve(tracks.size());
    for (const auto& t : tracks) ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(), [](const CycloneTrack* a, const CycloneTrack* b) {
        return a->cyclone_id < b->cyclone_id;
    });

    for (const CycloneTrack* track : ordered) {
        if (holdout_ids.count(track->cyclone_id)) {
            seen_holdouts.insert(track->cyclone_id);
            if (holdout_out) holdout_out->push_back(*track);
            continue;
        }
        auto windows = make_windows(*track, window_length);
        if (windows.empty()) {
            if (report) ++report->tracks_skipped_short;
            continue;
        }
        if (report) ++report->tracks_used;
        std::move(windows.begin(), windows.end(), std::back_inserter(ds.samples));
    }

    for (const auto& id : holdout_ids) {
        if (!seen_holdouts.count(id) && report)
            report->warnings.push_back("holdout id '" + id + "' not present in tracks");
    }

    if (ds.samples.empty())
        throw InvalidInput("build_dataset: no track reaches window length " +
                           std::to_string(window_length));

    std::vector<std::string> names(kFeatureNames.begin(), kFeatureNames.end());
    ds.feature_scaler = fit_scaler(feature_rows(ds.samples), std::move(names));
    return ds;
}

void export_dataset_csv(std::ostream& out, const Dataset& dataset) {
    out << "cyclone_id,k";
    for (int r = 1; r <= dataset.window_length; ++r)
        for (const char* f : kFeatureNames) out << ",x" << r << '_' << f;
    out << ",y_msws_kt,y_lat_deg,y_lon_deg,y_hours\n";
    char buf[64];
    const auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        out << ',' << buf;
    };
    for (const auto& s : dataset.samples) {
        out << s.cyclone_id << ',' << s.k;
        for (Eigen::Index r = 0; r < s.x.rows(); ++r)
            for (Eigen::Index c = 0; c < s.x.cols(); ++c) put(s.x(r, c));
        put(s.y.msws_kt);
        put(s.y.lat_deg);
        put(s.y.lon_deg);
        put(s.y.hours_to_landfall);
        out << '\n';
    }
}

}  // namespace tclf
