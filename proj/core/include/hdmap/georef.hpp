#pragma once

#include <string>
#include <string_view>

#include "hdmap/geometry.hpp"

namespace hdmap {

enum class Hemisphere { kNorth, kSouth };

/// Tile anchor: UTM position of the top-left corner of the top-left pixel
/// plus the ground sampling distance. Pixel centres sit at +0.5 pixel.
struct GeoReference {
  int utm_zone = 32;
  Hemisphere hemisphere = Hemisphere::kNorth;
  double origin_easting = 0.0;
  double origin_northing = 0.0;
  double gsd = 0.05;  // metres per pixel

  /// Throws InvalidArgument when the zone or gsd is out of range.
  void validate() const;

  friend bool operator==(const GeoReference&, const GeoReference&) = default;
};

struct UtmCoordinate {
  double easting = 0.0;
  double northing = 0.0;
};

struct LatLon {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

namespace geo {

/// Sub-pixel image coordinates (x right, y down) to UTM, pixel-centre convention.
UtmCoordinate pixel_to_utm(Point2 pixel, const GeoReference& ref);
Point2 utm_to_pixel(UtmCoordinate utm, const GeoReference& ref);

/// Image-space polyline to a metre polyline whose coordinates are
/// (easting, northing).
Polyline pixels_to_utm(const Polyline& pixels, const GeoReference& ref);

/// Central meridian of a UTM zone in degrees.
double central_meridian(int zone);

/// Transverse Mercator on WGS84 (k0 = 0.9996, false easting 500 km, false
/// northing 10000 km south), Krueger series to sixth order in n with an
/// exact Newton inversion of the conformal latitude.
UtmCoordinate wgs84_to_utm(LatLon ll, int zone, Hemisphere hemisphere);
/// Throws InvalidArgument for easting/northing outside the zone's valid range.
LatLon utm_to_wgs84(UtmCoordinate utm, int zone, Hemisphere hemisphere);

/// Parses the `key=value` sidecar (`zone`, `hemisphere`, `origin_easting`,
/// `origin_northing`, `gsd`). Throws InputError on missing or bad values.
GeoReference parse_georef(std::string_view text);
GeoReference load_georef(const std::string& path);
std::string format_georef(const GeoReference& ref);

}  // namespace geo
}  // namespace hdmap
