#include <doctest.h>

#include <cmath>

#include "tclf/errors.hpp"
#include "tclf/geo.hpp"
#include "tclf/preprocess.hpp"
#include "tclf/rng.hpp"
#include "tclf/timeutil.hpp"

using namespace tclf;

namespace {

RawRecord rec(const char* id, const char* ts, double lat, double lon, double msws, double ecp,
              double sst, bool landfall = false) {
    RawRecord r;
    r.cyclone_id = id;
    r.timestamp = parse_iso8601(ts);
    r.lat_deg = lat;
    r.lon_deg = lon;
    r.msws_kt = msws;
    r.ecp_hpa = ecp;
    r.sst_c = sst;
    r.landfall = landfall;
    return r;
}

}  // namespace

TEST_CASE("gap interpolation fills the 9-hour fixture with the linear rule") {
    // d(0h)=10, d(9h)=16 -> n=3, D=2 -> d(3h)=12, d(6h)=14.
    std::vector<RawRecord> pts{rec("A", "2020-05-16T00:00:00Z", 10, 10, 10, 1000, 10),
                               rec("A", "2020-05-16T09:00:00Z", 16, 16, 16, 1006, 16)};
    const auto filled = interpolate_gaps(pts);
    REQUIRE(filled.size() == 4);
    CHECK(filled[1].msws_kt == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(filled[2].msws_kt == doctest::Approx(14.0).epsilon(1e-12));
    CHECK(filled[1].lat_deg == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(*filled[2].sst_c == doctest::Approx(14.0).epsilon(1e-12));
    CHECK(filled[1].timestamp - filled[0].timestamp == 3 * 3600);
    CHECK_FALSE(filled[1].landfall);
}

TEST_CASE("gap-free series is returned unchanged") {
    std::vector<RawRecord> pts{rec("A", "2020-05-16T00:00:00Z", 5, 80, 20, 1000, 28),
                               rec("A", "2020-05-16T03:00:00Z", 7, 81, 22, 999, 28)};
    const auto filled = interpolate_gaps(pts);
    REQUIRE(filled.size() == 2);
    CHECK(filled[0].lat_deg == 5.0);
    CHECK(filled[1].lat_deg == 7.0);
}

TEST_CASE("12-hour latitude gap: 10.0 -> 11.0 gives quarter steps") {
    std::vector<RawRecord> pts{rec("A", "2020-05-16T00:00:00Z", 10.0, 85, 30, 1000, 28),
                               rec("A", "2020-05-16T12:00:00Z", 11.0, 86, 34, 998, 28)};
    const auto filled = interpolate_gaps(pts);
    REQUIRE(filled.size() == 5);
    CHECK(filled[1].lat_deg == doctest::Approx(10.25).epsilon(1e-12));
    CHECK(filled[2].lat_deg == doctest::Approx(10.50).epsilon(1e-12));
    CHECK(filled[3].lat_deg == doctest::Approx(10.75).epsilon(1e-12));
}

TEST_CASE("interpolation property: constant per-step increment across random gaps") {
    Rng rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(10));  // gap of n steps
        const double v0 = rng.uniform(-50, 50);
        const double v1 = rng.uniform(-50, 50);
        std::vector<RawRecord> pts{rec("A", "2020-01-01T00:00:00Z", 5, 80, 20, 1000, v0),
                                   rec("A", "2020-01-01T00:00:00Z", 6, 81, 22, 999, v1)};
        pts[0].msws_kt = v0;
        pts[1].msws_kt = v1;
        pts[1].timestamp = pts[0].timestamp + n * 3 * 3600;
        const auto filled = interpolate_gaps(pts);
        REQUIRE(static_cast<int>(filled.size()) == n + 1);
        const double d = (v1 - v0) / n;
        for (std::size_t i = 1; i < filled.size(); ++i)
            CHECK(filled[i].msws_kt - filled[i - 1].msws_kt == doctest::Approx(d).epsilon(1e-9));
        CHECK(filled.front().msws_kt == v0);
        CHECK(filled.back().msws_kt == v1);
    }
}

TEST_CASE("interpolation rejects gaps that are not multiples of 3 hours") {
    std::vector<RawRecord> pts{rec("A", "2020-05-16T00:00:00Z", 5, 80, 20, 1000, 28),
                               rec("A", "2020-05-16T04:00:00Z", 7, 81, 22, 999, 28)};
    CHECK_THROWS_AS(interpolate_gaps(pts), InvalidInput);
    CHECK_THROWS_AS(interpolate_gaps({pts[0]}), InvalidInput);
}

TEST_CASE("derive_motion zeroes the first point and fills the rest") {
    CycloneTrack track;
    track.cyclone_id = "A";
    track.points.resize(3);
    track.points[0].lat_deg = 0.0;
    track.points[0].lon_deg = 0.0;
    track.points[1].lat_deg = 0.0;
    track.points[1].lon_deg = 1.0;
    track.points[2].lat_deg = 1.0;
    track.points[2].lon_deg = 1.0;
    // Stale values must be overwritten.
    track.points[0].distance_km = 99;
    track.points[0].direction_deg = 99;
    derive_motion(track);
    CHECK(track.points[0].distance_km == 0.0);
    CHECK(track.points[0].direction_deg == 0.0);
    // One degree of longitude at the equator with R = 6371.0088.
    CHECK(track.points[1].distance_km == doctest::Approx(111.19508).epsilon(1e-6));
    CHECK(track.points[1].direction_deg == doctest::Approx(90.0));
    CHECK(track.points[2].direction_deg == doctest::Approx(0.0));
}

TEST_CASE("derive_motion on a stationary track gives zeros") {
    CycloneTrack track;
    track.points.resize(2);
    for (auto& p : track.points) {
        p.lat_deg = 12.0;
        p.lon_deg = 85.0;
    }
    derive_motion(track);
    CHECK(track.points[1].distance_km == 0.0);
    CHECK(track.points[1].direction_deg == 0.0);
}

TEST_CASE("derive_motion distances are invariant under whole-track longitude shifts") {
    Rng rng(2026);
    for (int trial = 0; trial < 20; ++trial) {
        CycloneTrack a;
        a.points.resize(8);
        double lat = rng.uniform(-40, 40), lon = rng.uniform(-90, 90);
        for (auto& p : a.points) {
            lat += rng.uniform(-0.5, 0.5);
            lon += rng.uniform(-0.5, 0.5);
            p.lat_deg = lat;
            p.lon_deg = lon;
        }
        CycloneTrack b = a;
        const double shift = rng.uniform(-60, 60);
        for (auto& p : b.points) p.lon_deg = wrap_longitude_deg(p.lon_deg + shift);
        derive_motion(a);
        derive_motion(b);
        for (std::size_t i = 0; i < a.points.size(); ++i)
            CHECK(a.points[i].distance_km ==
                  doctest::Approx(b.points[i].distance_km).epsilon(1e-6));
    }
}

TEST_CASE("fit_scaler uses population standard deviation") {
    Eigen::MatrixXd m(2, 1);
    m << 1, 3;
    const Scaler s = fit_scaler(m);
    CHECK(s.mean(0) == doctest::Approx(2.0));
    CHECK(s.std(0) == doctest::Approx(1.0));  // population std of {1,3}
    CHECK(s.constant_columns.empty());
}

TEST_CASE("constant columns are guarded to sigma = 1") {
    Eigen::MatrixXd m(3, 2);
    m << 5, 1, 5, 2, 5, 3;
    const Scaler s = fit_scaler(m);
    CHECK(s.std(0) == 1.0);
    REQUIRE(s.constant_columns.size() == 1);
    CHECK(s.constant_columns[0] == 0);
    const Eigen::MatrixXd t = s.transform(m);
    CHECK(t.col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scaler transform examples and round trip") {
    Eigen::MatrixXd m(4, 1);
    m << 1, 2, 3, 2;
    const Scaler s = fit_scaler(m);
    // x = mu -> 0
    Eigen::MatrixXd at_mu(1, 1);
    at_mu << s.mean(0);
    CHECK(s.transform(at_mu)(0, 0) == doctest::Approx(0.0));

    Eigen::MatrixXd x(1, 1);
    x << 3;
    Scaler manual;
    manual.mean = Eigen::VectorXd::Constant(1, 2.0);
    manual.std = Eigen::VectorXd::Constant(1, 1.0);
    CHECK(manual.transform(x)(0, 0) == doctest::Approx(1.0));

    const Eigen::MatrixXd round = s.inverse_transform(s.transform(m));
    CHECK((round - m).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("transform is affine in its input") {
    Rng rng(5150);
    Eigen::MatrixXd base(16, 3);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 3; ++c) base(r, c) = rng.uniform(-10, 10);
    const Scaler s = fit_scaler(base);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd x(1, 3), y(1, 3);
        for (int c = 0; c < 3; ++c) {
            x(0, c) = rng.uniform(-10, 10);
            y(0, c) = rng.uniform(-10, 10);
        }
        const double alpha = rng.uniform(0, 1);
        const Eigen::MatrixXd lhs = s.transform(alpha * x + (1 - alpha) * y);
        const Eigen::MatrixXd rhs = alpha * s.transform(x) + (1 - alpha) * s.transform(y);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("scaler rejects too-small and mismatched inputs") {
    Eigen::MatrixXd one(1, 2);
    one << 1, 2;
    CHECK_THROWS_AS(fit_scaler(one), InvalidInput);
    CHECK_THROWS_AS(fit_scaler(Eigen::MatrixXd(0, 2)), InvalidInput);

    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 3, 4;
    const Scaler s = fit_scaler(m);
    CHECK_THROWS_AS(s.transform(Eigen::MatrixXd(2, 3)), InvalidInput);
    CHECK_THROWS_AS(s.inverse_transform(Eigen::MatrixXd(2, 1)), InvalidInput);
}

TEST_CASE("grade bands follow the IMD table") {
    CHECK(grade_of(45).grade == 3);
    CHECK(std::string(grade_of(45).label) == "CS");
    CHECK(grade_of(120).grade == 7);
    CHECK(std::string(grade_of(120).label) == "SS");
    CHECK(grade_of(16.9).grade == 0);
    CHECK(std::string(grade_of(16.9).label) == "LP");
    CHECK(grade_of(0).grade == 0);
    CHECK(grade_of(17).grade == 1);
    CHECK(grade_of(27.9).grade == 1);
    CHECK(grade_of(28).grade == 2);
    CHECK(grade_of(33.9).grade == 2);
    CHECK(grade_of(34).grade == 3);
    CHECK(grade_of(48).grade == 4);
    CHECK(grade_of(64).grade == 5);
    CHECK(grade_of(90).grade == 6);
    CHECK(grade_of(119.99).grade == 6);
    CHECK(grade_of(300).grade == 7);
    CHECK_THROWS_AS(grade_of(-1), InvalidInput);
}

TEST_CASE("grade is monotone non-decreasing in msws") {
    int prev = 0;
    for (double w = 0; w <= 200; w += 0.25) {
        const int g = grade_of(w).grade;
        CHECK(g >= prev);
        prev = g;
    }
}
