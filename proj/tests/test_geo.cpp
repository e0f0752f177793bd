#include <doctest.h>

#include <cmath>

#include "tclf/errors.hpp"
#include "tclf/geo.hpp"
#include "tclf/rng.hpp"

using namespace tclf;

TEST_CASE("haversine of identical points is zero") {
    CHECK(haversine_km({0, 0}, {0, 0}) == 0.0);
    CHECK(haversine_km({12.5, 81.25}, {12.5, 81.25}) == 0.0);
}

TEST_CASE("haversine quarter meridian matches the analytic arc") {
    // 90 degrees along the equator is exactly (pi/2) * R on the sphere.
    const double expected = M_PI / 2.0 * kEarthRadiusKm;  // 10007.557221...
    CHECK(std::abs(haversine_km({0, 0}, {0, 90}) - expected) < 0.01);
    CHECK(haversine_km({0, 0}, {0, 90}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("haversine matches an independently evaluated pair") {
    // (36.12, -86.67) -> (33.94, -118.40), evaluated by hand beforehand.
    CHECK(haversine_km({36.12, -86.67}, {33.94, -118.40}) ==
          doctest::Approx(2886.4484).epsilon(1e-4));
    CHECK(std::abs(haversine_km({36.12, -86.67}, {33.94, -118.40}) - 2886.4) < 1.0);
}

TEST_CASE("haversine rejects non-finite and out-of-range coordinates") {
    CHECK_THROWS_AS(haversine_km({std::nan(""), 0}, {0, 0}), InvalidInput);
    CHECK_THROWS_AS(haversine_km({0, 0}, {0, std::numeric_limits<double>::infinity()}),
                    InvalidInput);
    CHECK_THROWS_AS(haversine_km({91.0, 0}, {0, 0}), InvalidInput);
    CHECK_THROWS_AS(haversine_km({0, -181.0}, {0, 0}), InvalidInput);
}

TEST_CASE("initial bearing cardinal directions") {
    CHECK(initial_bearing_deg({0, 0}, {0, 10}) == doctest::Approx(90.0));
    CHECK(initial_bearing_deg({0, 0}, {10, 0}) == doctest::Approx(0.0));
    CHECK(initial_bearing_deg({10, 0}, {-10, 0}) == doctest::Approx(180.0));
    CHECK(initial_bearing_deg({0, 10}, {0, 0}) == doctest::Approx(270.0));
}

TEST_CASE("bearing of coincident points is zero by convention") {
    CHECK(initial_bearing_deg({5.5, 77.0}, {5.5, 77.0}) == 0.0);
}

TEST_CASE("haversine symmetry and range over random pairs") {
    Rng rng(20240501);
    for (int i = 0; i < 10000; ++i) {
        const GeoPoint a{rng.uniform(-90, 90), rng.uniform(-180, 180)};
        const GeoPoint b{rng.uniform(-90, 90), rng.uniform(-180, 180)};
        const double ab = haversine_km(a, b);
        const double ba = haversine_km(b, a);
        CHECK(std::abs(ab - ba) <= 1e-9);
        CHECK(ab >= 0.0);
        CHECK(ab <= M_PI * kEarthRadiusKm);
    }
}

TEST_CASE("haversine triangle inequality over random triples") {
    Rng rng(77);
    for (int i = 0; i < 10000; ++i) {
        const GeoPoint a{rng.uniform(-90, 90), rng.uniform(-180, 180)};
        const GeoPoint b{rng.uniform(-90, 90), rng.uniform(-180, 180)};
        const GeoPoint c{rng.uniform(-90, 90), rng.uniform(-180, 180)};
        CHECK(haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-6);
    }
}

TEST_CASE("bearing stays in [0, 360) over random pairs") {
    Rng rng(91);
    for (int i = 0; i < 10000; ++i) {
        const GeoPoint a{rng.uniform(-89, 89), rng.uniform(-180, 180)};
        const GeoPoint b{rng.uniform(-89, 89), rng.uniform(-180, 180)};
        const double deg = initial_bearing_deg(a, b);
        CHECK(deg >= 0.0);
        CHECK(deg < 360.0);
    }
}

TEST_CASE("longitude wrapping") {
    CHECK(wrap_longitude_deg(190.0) == doctest::Approx(-170.0));
    CHECK(wrap_longitude_deg(-190.0) == doctest::Approx(170.0));
    CHECK(wrap_longitude_deg(85.0) == doctest::Approx(85.0));
    CHECK(wrap_longitude_deg(360.0) == doctest::Approx(0.0));
}
