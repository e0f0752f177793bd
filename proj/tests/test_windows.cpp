#include <doctest.h>

#include <sstream>

#include "tclf/errors.hpp"
#include "tclf/rng.hpp"
#include "tclf/windows.hpp"

using namespace tclf;

namespace {

CycloneTrack make_track(const std::string& id, int length, double lat0 = 10.0) {
    CycloneTrack t;
    t.cyclone_id = id;
    t.points.resize(length);
    for (int i = 0; i < length; ++i) {
        TrackPoint& p = t.points[i];
        p.t_hours = 3.0 * i;
        p.msws_kt = 20.0 + i;
        p.ecp_hpa = 1005.0 - i;
        p.sst_c = 28.0;
        p.distance_km = i == 0 ? 0.0 : 25.0;
        p.direction_deg = i == 0 ? 0.0 : 315.0;
        p.lat_deg = lat0 + 0.2 * i;
        p.lon_deg = 85.0 - 0.1 * i;
    }
    return t;
}

}  // namespace

TEST_CASE("a 36-point track with T=4 yields 33 windows") {
    const auto samples = make_windows(make_track("AMPHAN-LIKE", 36), 4);
    CHECK(samples.size() == 33);
    CHECK(samples.front().k == 1);
    CHECK(samples.back().k == 33);
}

TEST_CASE("window contents, targets, and hours arithmetic") {
    const CycloneTrack track = make_track("A", 10);
    const auto samples = make_windows(track, 8);
    REQUIRE(samples.size() == 3);

    // k = 1 covers rows 1..8; remaining time 3 * (10 - 8) = 6 h.
    CHECK(samples[0].y.hours_to_landfall == doctest::Approx(6.0));
    CHECK(samples[1].y.hours_to_landfall == doctest::Approx(3.0));
    CHECK(samples[2].y.hours_to_landfall == doctest::Approx(0.0));

    for (const auto& s : samples) {
        CHECK(s.x.rows() == 8);
        CHECK(s.x.cols() == 7);
        CHECK(s.y.msws_kt == track.landfall().msws_kt);
        CHECK(s.y.lat_deg == track.landfall().lat_deg);
        CHECK(s.y.lon_deg == track.landfall().lon_deg);
    }
    // Feature order: msws, ecp, sst, distance, direction, lat, lon.
    CHECK(samples[1].x(0, 0) == track.points[1].msws_kt);
    CHECK(samples[1].x(0, 5) == track.points[1].lat_deg);
    CHECK(samples[1].x(7, 6) == track.points[8].lon_deg);
}

TEST_CASE("track of exactly T points gives one window at zero hours") {
    const auto samples = make_windows(make_track("B", 8), 8);
    REQUIRE(samples.size() == 1);
    CHECK(samples[0].y.hours_to_landfall == 0.0);
}

TEST_CASE("short tracks are skipped, bad T rejected") {
    CHECK(make_windows(make_track("C", 5), 8).empty());
    CHECK_THROWS_AS(make_windows(make_track("C", 5), 1), InvalidInput);
}

TEST_CASE("window count and hours decrement hold over random lengths") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const int t_l = 2 + static_cast<int>(rng.below(40));
        const int t = 2 + static_cast<int>(rng.below(12));
        const auto samples = make_windows(make_track("R", t_l), t);
        CHECK(samples.size() == static_cast<std::size_t>(std::max(0, t_l - t + 1)));
        for (std::size_t i = 1; i < samples.size(); ++i)
            CHECK(samples[i - 1].y.hours_to_landfall - samples[i].y.hours_to_landfall ==
                  doctest::Approx(3.0));
        if (!samples.empty()) CHECK(samples.back().y.hours_to_landfall == 0.0);
    }
}

TEST_CASE("build_dataset sums windows across tracks") {
    const std::vector<CycloneTrack> tracks{make_track("A", 10), make_track("B", 12)};
    const Dataset ds = build_dataset(tracks, 8, {});
    CHECK(ds.samples.size() == 3 + 5);
    CHECK(ds.window_length == 8);
    CHECK(ds.feature_scaler.mean.size() == 7);
}

TEST_CASE("holdout cyclones contribute no samples and are returned whole") {
    const std::vector<CycloneTrack> tracks{make_track("A", 10), make_track("B", 12)};
    std::vector<CycloneTrack> holdout;
    BuildReport report;
    const Dataset ds = build_dataset(tracks, 8, {"B"}, &holdout, &report);
    CHECK(ds.samples.size() == 3);
    for (const auto& s : ds.samples) CHECK(s.cyclone_id == "A");
    REQUIRE(holdout.size() == 1);
    CHECK(holdout[0].cyclone_id == "B");
    CHECK(report.warnings.empty());
}

TEST_CASE("unknown holdout id warns but does not fail") {
    const std::vector<CycloneTrack> tracks{make_track("A", 10)};
    BuildReport report;
    const Dataset ds = build_dataset(tracks, 8, {"NOPE"}, nullptr, &report);
    CHECK(ds.samples.size() == 3);
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("NOPE") != std::string::npos);
}

TEST_CASE("all tracks shorter than T is an error") {
    const std::vector<CycloneTrack> tracks{make_track("A", 5), make_track("B", 6)};
    CHECK_THROWS_AS(build_dataset(tracks, 8, {}), InvalidInput);
}

TEST_CASE("scaler statistics change exactly when training samples change") {
    const std::vector<CycloneTrack> tracks{make_track("A", 10), make_track("B", 12, 14.0)};
    const Dataset d1 = build_dataset(tracks, 8, {});
    const Dataset d2 = build_dataset(tracks, 8, {});
    CHECK(d1.feature_scaler.mean == d2.feature_scaler.mean);
    CHECK(d1.feature_scaler.std == d2.feature_scaler.std);

    const Dataset d3 = build_dataset(tracks, 8, {"B"});
    CHECK(d1.feature_scaler.mean != d3.feature_scaler.mean);
}

TEST_CASE("no holdout cyclone leaks into training samples") {
    std::vector<CycloneTrack> tracks;
    for (int i = 0; i < 6; ++i)
        tracks.push_back(make_track("T" + std::to_string(i), 9 + i, 8.0 + i));
    const std::set<std::string> holdout{"T1", "T4"};
    const Dataset ds = build_dataset(tracks, 8, holdout);
    for (const auto& s : ds.samples) CHECK(holdout.count(s.cyclone_id) == 0);
}

TEST_CASE("dataset export writes the documented header and row count") {
    const std::vector<CycloneTrack> tracks{make_track("A", 10)};
    const Dataset ds = build_dataset(tracks, 8, {});
    std::ostringstream out;
    export_dataset_csv(out, ds);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header.find("cyclone_id,k,x1_msws_kt") == 0);
    CHECK(header.find("x8_lon_deg") != std::string::npos);
    CHECK(header.find("y_msws_kt,y_lat_deg,y_lon_deg,y_hours") != std::string::npos);
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 3);
}
