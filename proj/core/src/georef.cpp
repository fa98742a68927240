#include "hdmap/georef.hpp"

#include <array>
#include <cmath>

#include "hdmap/error.hpp"
#include "hdmap/keyvalue.hpp"

namespace hdmap {

void GeoReference::validate() const {
  if (utm_zone < 1 || utm_zone > 60) throw InvalidArgument("UTM zone must be in 1..60");
  if (!(gsd > 0.0) || !std::isfinite(gsd)) throw InvalidArgument("gsd must be positive");
  if (!std::isfinite(origin_easting) || !std::isfinite(origin_northing)) {
    throw InvalidArgument("georeference origin must be finite");
  }
}

namespace geo {
namespace {

constexpr double kA = 6378137.0;
constexpr double kF = 1.0 / 298.257223563;
constexpr double kK0 = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;

struct KruegerSeries {
  double e;             // first eccentricity
  double e2;            // e^2
  double rectifying;    // A, radius of the rectifying sphere
  std::array<double, 6> alpha;
  std::array<double, 6> beta;
};

const KruegerSeries& series() {
  static const KruegerSeries s = [] {
    KruegerSeries k{};
    const double n = kF / (2.0 - kF);
    const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
    k.e2 = kF * (2.0 - kF);
    k.e = std::sqrt(k.e2);
    k.rectifying = kA / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
    k.alpha = {
        n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 + 7891 * n6 / 37800,
        13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 - 1983433 * n6 / 1935360,
        61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 + 167603 * n6 / 181440,
        49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600,
        34729 * n5 / 80640 - 3418889 * n6 / 1995840,
        212378941 * n6 / 319334400,
    };
    k.beta = {
        n / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360 - 81 * n5 / 512 + 96199 * n6 / 604800,
        n2 / 48 + n3 / 15 - 437 * n4 / 1440 + 46 * n5 / 105 - 1118711 * n6 / 3870720,
        17 * n3 / 480 - 37 * n4 / 840 - 209 * n5 / 4480 + 5569 * n6 / 90720,
        4397 * n4 / 161280 - 11 * n5 / 504 - 830251 * n6 / 7257600,
        4583 * n5 / 161280 - 108847 * n6 / 3991680,
        20648693 * n6 / 638668800,
    };
    return k;
  }();
  return s;
}

// tan(conformal latitude) from tan(geodetic latitude).
double conformal_tan(double tau, double e) {
  const double sigma = std::sinh(e * std::atanh(e * tau / std::hypot(1.0, tau)));
  return tau * std::hypot(1.0, sigma) - sigma * std::hypot(1.0, tau);
}

// Newton inversion of conformal_tan.
double geodetic_tan(double tau_prime, double e, double e2) {
  double tau = tau_prime;
  const double one_minus_e2 = 1.0 - e2;
  for (int i = 0; i < 10; ++i) {
    const double tp = conformal_tan(tau, e);
    const double dtau = (tau_prime - tp) / std::hypot(1.0, tp) *
                        (1.0 + one_minus_e2 * tau * tau) /
                        (one_minus_e2 * std::hypot(1.0, tau));
    tau += dtau;
    if (std::abs(dtau) <= 1e-15 * std::max(1.0, std::abs(tau))) break;
  }
  return tau;
}

void check_zone(int zone) {
  if (zone < 1 || zone > 60) throw InvalidArgument("UTM zone must be in 1..60");
}

}  // namespace

UtmCoordinate pixel_to_utm(Point2 pixel, const GeoReference& ref) {
  return {ref.origin_easting + (pixel.x + 0.5) * ref.gsd,
          ref.origin_northing - (pixel.y + 0.5) * ref.gsd};
}

Point2 utm_to_pixel(UtmCoordinate utm, const GeoReference& ref) {
  return {(utm.easting - ref.origin_easting) / ref.gsd - 0.5,
          (ref.origin_northing - utm.northing) / ref.gsd - 0.5};
}

Polyline pixels_to_utm(const Polyline& pixels, const GeoReference& ref) {
  std::vector<Point2> pts;
  pts.reserve(pixels.size());
  for (const Point2& p : pixels.points()) {
    const UtmCoordinate u = pixel_to_utm(p, ref);
    pts.push_back({u.easting, u.northing});
  }
  return Polyline(std::move(pts), Unit::kMetre, pixels.closed());
}

double central_meridian(int zone) {
  check_zone(zone);
  return -183.0 + 6.0 * zone;
}

UtmCoordinate wgs84_to_utm(LatLon ll, int zone, Hemisphere hemisphere) {
  if (!(std::abs(ll.lat) <= 90.0) || !std::isfinite(ll.lon)) {
    throw InvalidArgument("latitude/longitude out of range");
  }
  const KruegerSeries& k = series();
  const double phi = ll.lat * kDegree;
  double dlon = std::remainder(ll.lon - central_meridian(zone), 360.0) * kDegree;

  const double tau_prime = conformal_tan(std::tan(phi), k.e);
  const double xi_p = std::atan2(tau_prime, std::cos(dlon));
  const double eta_p = std::asinh(std::sin(dlon) / std::hypot(tau_prime, std::cos(dlon)));

  double xi = xi_p;
  double eta = eta_p;
  for (int j = 1; j <= 6; ++j) {
    const double a = k.alpha[j - 1];
    xi += a * std::sin(2 * j * xi_p) * std::cosh(2 * j * eta_p);
    eta += a * std::cos(2 * j * xi_p) * std::sinh(2 * j * eta_p);
  }
  UtmCoordinate out{kFalseEasting + kK0 * k.rectifying * eta, kK0 * k.rectifying * xi};
  if (hemisphere == Hemisphere::kSouth) out.northing += kFalseNorthingSouth;
  return out;
}

LatLon utm_to_wgs84(UtmCoordinate utm, int zone, Hemisphere hemisphere) {
  check_zone(zone);
  const bool north = hemisphere == Hemisphere::kNorth;
  if (!(utm.easting >= 100000.0 && utm.easting <= 900000.0)) {
    throw InvalidArgument("easting outside the UTM zone range");
  }
  if (north ? !(utm.northing >= 0.0 && utm.northing <= 9400000.0)
            : !(utm.northing >= 1000000.0 && utm.northing <= kFalseNorthingSouth)) {
    throw InvalidArgument("northing outside the UTM zone range");
  }
  const KruegerSeries& k = series();
  const double northing = north ? utm.northing : utm.northing - kFalseNorthingSouth;
  const double xi = northing / (kK0 * k.rectifying);
  const double eta = (utm.easting - kFalseEasting) / (kK0 * k.rectifying);

  double xi_p = xi;
  double eta_p = eta;
  for (int j = 1; j <= 6; ++j) {
    const double b = k.beta[j - 1];
    xi_p -= b * std::sin(2 * j * xi) * std::cosh(2 * j * eta);
    eta_p -= b * std::cos(2 * j * xi) * std::sinh(2 * j * eta);
  }
  const double tau_prime = std::sin(xi_p) / std::hypot(std::sinh(eta_p), std::cos(xi_p));
  const double dlon = std::atan2(std::sinh(eta_p), std::cos(xi_p));
  const double tau = geodetic_tan(tau_prime, k.e, k.e2);
  return {std::atan(tau) / kDegree, central_meridian(zone) + dlon / kDegree};
}

GeoReference parse_georef(std::string_view text) {
  const auto kv = parse_key_values(text);
  auto need = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw InputError(std::string("georeference is missing '") + key + "'");
    return it->second;
  };
  for (const auto& [key, value] : kv) {
    if (key != "zone" && key != "hemisphere" && key != "origin_easting" &&
        key != "origin_northing" && key != "gsd") {
      throw InputError("unknown georeference key '" + key + "'");
    }
  }
  GeoReference ref;
  ref.utm_zone = parse_int("zone", need("zone"));
  const std::string& hemi = need("hemisphere");
  if (hemi == "N" || hemi == "n") {
    ref.hemisphere = Hemisphere::kNorth;
  } else if (hemi == "S" || hemi == "s") {
    ref.hemisphere = Hemisphere::kSouth;
  } else {
    throw InputError("hemisphere must be N or S");
  }
  ref.origin_easting = parse_double("origin_easting", need("origin_easting"));
  ref.origin_northing = parse_double("origin_northing", need("origin_northing"));
  ref.gsd = parse_double("gsd", need("gsd"));
  try {
    ref.validate();
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
  return ref;
}

GeoReference load_georef(const std::string& path) { return parse_georef(read_text_file(path)); }

std::string format_georef(const GeoReference& ref) {
  std::string out;
  out += "zone=" + std::to_string(ref.utm_zone) + "\n";
  out += std::string("hemisphere=") + (ref.hemisphere == Hemisphere::kNorth ? "N" : "S") + "\n";
  out += "origin_easting=" + format_double(ref.origin_easting) + "\n";
  out += "origin_northing=" + format_double(ref.origin_northing) + "\n";
  out += "gsd=" + format_double(ref.gsd) + "\n";
  return out;
}

}  // namespace geo
}  // namespace hdmap
