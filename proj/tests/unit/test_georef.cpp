#include <gtest/gtest.h>

#include <random>

#include "hdmap/georef.hpp"
#include "oracles.hpp"

using namespace hdmap;

namespace {

struct Vector {
  double lat, lon;
  int zone;
  Hemisphere hemi;
  double easting, northing;
  double precision;  // metres, as published
};

// Published conversions (WGS84 / UTM): the equator at the Greenwich meridian,
// the GeographicLib GeoConvert manual example, and the Eiffel Tower example
// from the movable-type geodesy library documentation.
const Vector kPublished[] = {
    {0.0, 0.0, 31, Hemisphere::kNorth, 166021.4431, 0.0, 1e-4},
    {33.3, 44.4, 38, Hemisphere::kNorth, 444140.54, 3684706.36, 0.005},
    {48.8582, 2.2945, 31, Hemisphere::kNorth, 448251.795, 5411932.678, 0.0005},
};

}  // namespace

TEST(PixelToUtm, CentreConvention) {
  GeoReference r;
  r.origin_easting = 1000.0;
  r.origin_northing = 2000.0;
  r.gsd = 0.05;
  auto u = geo::pixel_to_utm({0, 0}, r);
  EXPECT_DOUBLE_EQ(u.easting, 1000.025);
  EXPECT_DOUBLE_EQ(u.northing, 1999.975);
  u = geo::pixel_to_utm({100, 40}, r);
  EXPECT_NEAR(u.easting, 1005.025, 1e-9);
  EXPECT_NEAR(u.northing, 1997.975, 1e-9);
  const Point2 back = geo::utm_to_pixel(u, r);
  EXPECT_NEAR(back.x, 100.0, 1e-9);
  EXPECT_NEAR(back.y, 40.0, 1e-9);
}

TEST(Geodesy, PublishedVectors) {
  for (const Vector& v : kPublished) {
    const auto u = geo::wgs84_to_utm({v.lat, v.lon}, v.zone, v.hemi);
    EXPECT_NEAR(u.easting, v.easting, v.precision);
    EXPECT_NEAR(u.northing, v.northing, v.precision);
    const auto ll = geo::utm_to_wgs84({v.easting, v.northing}, v.zone, v.hemi);
    EXPECT_NEAR(ll.lat, v.lat, 1e-6);
    EXPECT_NEAR(ll.lon, v.lon, 1e-6);
  }
}

TEST(Geodesy, CentralMeridianMatchesMeridianArc) {
  for (double lat : {0.0, 12.5, 45.0, 51.8, 70.0}) {
    const auto u = geo::wgs84_to_utm({lat, 9.0}, 32, Hemisphere::kNorth);
    EXPECT_NEAR(u.easting, 500000.0, 1e-6);
    EXPECT_NEAR(u.northing, oracle::kK0 * oracle::meridian_arc(lat * std::numbers::pi / 180.0), 1e-3);
    EXPECT_NEAR(geo::utm_to_wgs84({500000.0, u.northing}, 32, Hemisphere::kNorth).lon, 9.0, 1e-12);
  }
}

TEST(Geodesy, AgreesWithSeriesOracle) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> lat(-75.0, 75.0), dlon(-2.5, 2.5);
  std::uniform_int_distribution<int> zone(1, 60);
  for (int i = 0; i < 300; ++i) {
    const int z = zone(rng);
    const double la = lat(rng), lo = geo::central_meridian(z) + dlon(rng);
    const Hemisphere h = la < 0 ? Hemisphere::kSouth : Hemisphere::kNorth;
    const auto u = geo::wgs84_to_utm({la, lo}, z, h);
    const auto [e, n] = oracle::tm_series_forward(la, lo, z, h == Hemisphere::kSouth);
    EXPECT_NEAR(u.easting, e, 0.005) << la << " " << lo;
    EXPECT_NEAR(u.northing, n, 0.005) << la << " " << lo;
  }
}

TEST(Geodesy, SouthernHemisphere) {
  // Sydney Opera House, published to the metre.
  const auto u = geo::wgs84_to_utm({-33.857, 151.215}, 56, Hemisphere::kSouth);
  EXPECT_NEAR(u.easting, 334873.0, 1.0);
  EXPECT_NEAR(u.northing, 6252266.0, 1.0);
}

TEST(Geodesy, RoundTripWithinMillimetre) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> lat(-80.0, 84.0), dlon(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double la = lat(rng), lo = geo::central_meridian(33) + dlon(rng);
    const Hemisphere h = la < 0 ? Hemisphere::kSouth : Hemisphere::kNorth;
    const auto u = geo::wgs84_to_utm({la, lo}, 33, h);
    const auto back = geo::wgs84_to_utm(geo::utm_to_wgs84(u, 33, h), 33, h);
    EXPECT_NEAR(back.easting, u.easting, 1e-3);
    EXPECT_NEAR(back.northing, u.northing, 1e-3);
  }
}

TEST(Geodesy, RejectsOutOfRange) {
  EXPECT_THROW(geo::utm_to_wgs84({-5.0, 100.0}, 32, Hemisphere::kNorth), InvalidArgument);
  EXPECT_THROW(geo::utm_to_wgs84({500000.0, 2e7}, 32, Hemisphere::kNorth), InvalidArgument);
  GeoReference r;
  r.utm_zone = 61;
  EXPECT_THROW(r.validate(), InvalidArgument);
}

TEST(GeorefSidecar, ParseAndFormat) {
  const auto r = geo::parse_georef("  gsd = 0.05\norigin_northing=5628000\n# note\nzone=32\nhemisphere=N\norigin_easting = 294000.5\n");
  EXPECT_EQ(r.utm_zone, 32);
  EXPECT_EQ(r.hemisphere, Hemisphere::kNorth);
  EXPECT_DOUBLE_EQ(r.origin_easting, 294000.5);
  EXPECT_EQ(geo::parse_georef(geo::format_georef(r)), r);
  EXPECT_THROW(geo::parse_georef("zone=32\n"), InputError);
  EXPECT_THROW(geo::parse_georef("zone=32\nhemisphere=X\norigin_easting=1\norigin_northing=1\ngsd=0.05\n"),
               InputError);
}
