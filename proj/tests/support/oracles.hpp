#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library code they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "hdmap/geometry.hpp"
#include "hdmap/raster.hpp"

namespace oracle {

using hdmap::BinaryMask;
using hdmap::Pixel;
using hdmap::Point2;

// --- raster -----------------------------------------------------------------

/// Stack flood fill. Labels 1..K in raster order of each component's first pixel.
inline hdmap::Raster<int> flood_fill(const BinaryMask& m, bool eight) {
  hdmap::Raster<int> lab(m.width(), m.height(), 0);
  int next = 0;
  std::vector<Pixel> stack;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m(x, y) || lab(x, y)) continue;
      lab(x, y) = ++next;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (!eight && dx != 0 && dy != 0) continue;
            const int nx = p.x + dx, ny = p.y + dy;
            if (!m.contains(nx, ny) || !m(nx, ny) || lab(nx, ny)) continue;
            lab(nx, ny) = next;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  return lab;
}

inline int label_count(const hdmap::Raster<int>& lab) {
  int k = 0;
  for (int v : lab.data()) k = std::max(k, v);
  return k;
}

/// True when both label rasters induce the same partition of the set pixels.
inline bool same_partition(const hdmap::Raster<int>& a, const hdmap::Raster<int>& b) {
  if (a.width() != b.width() || a.height() != b.height()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const int u = a.data()[i], v = b.data()[i];
    if ((u == 0) != (v == 0)) return false;
    if (u == 0) continue;
    auto [it1, new1] = ab.emplace(u, v);
    auto [it2, new2] = ba.emplace(v, u);
    if (it1->second != v || it2->second != u) return false;
  }
  return true;
}

/// Foreground pixels with a 4-neighbour that is background or off-raster.
inline std::vector<Pixel> boundary_pixels(const BinaryMask& m) {
  std::vector<Pixel> out;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (!m(x, y)) continue;
      if (!m.get_or(x - 1, y, 0) || !m.get_or(x + 1, y, 0) || !m.get_or(x, y - 1, 0) ||
          !m.get_or(x, y + 1, 0)) {
        out.push_back({x, y});
      }
    }
  }
  return out;
}

/// Union of random discs, rectangles and bars.
inline BinaryMask random_blobs(std::mt19937_64& rng, int w, int h, int shapes) {
  BinaryMask m(w, h, 0);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> ux(0.0, w), uy(0.0, h), ur(2.0, 9.0);
  for (int s = 0; s < shapes; ++s) {
    const int k = kind(rng);
    const double cx = ux(rng), cy = uy(rng), r = ur(rng), r2 = ur(rng);
    const double ang = std::uniform_real_distribution<double>(0.0, std::numbers::pi)(rng);
    const double c = std::cos(ang), sn = std::sin(ang);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dx = x - cx, dy = y - cy;
        bool in = false;
        if (k == 0) {
          in = dx * dx + dy * dy <= r * r;
        } else {
          const double u = c * dx + sn * dy, v = -sn * dx + c * dy;
          in = k == 1 ? (std::abs(u) <= r && std::abs(v) <= r2) : (std::abs(u) <= 3 * r && std::abs(v) <= 1.5);
        }
        if (in) m(x, y) = 1;
      }
    }
  }
  return m;
}

// --- geometry ---------------------------------------------------------------

inline double seg_dist(Point2 p, Point2 a, Point2 b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double l2 = vx * vx + vy * vy;
  double t = l2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / l2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

inline double chain_dist(const std::vector<Point2>& chain, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) best = std::min(best, seg_dist(p, chain[i], chain[i + 1]));
  return best;
}

/// Arc-length position of each query point, located by a forward walk along
/// `chain` (queries must be ordered along the chain). Returns NaN for a point
/// that is not within `tol` of the chain ahead of the previous one.
inline std::vector<double> walk_locate(const std::vector<Point2>& chain,
                                       const std::vector<Point2>& queries, double tol) {
  std::vector<double> out;
  std::size_t seg = 0;
  double base = 0.0;
  for (const Point2& q : queries) {
    double found = std::numeric_limits<double>::quiet_NaN();
    while (seg + 1 < chain.size()) {
      const Point2 a = chain[seg], b = chain[seg + 1];
      if (seg_dist(q, a, b) <= tol) {
        found = base + std::hypot(q.x - a.x, q.y - a.y);
        break;
      }
      base += std::hypot(b.x - a.x, b.y - a.y);
      ++seg;
    }
    out.push_back(found);
  }
  return out;
}

inline double chain_length(const std::vector<Point2>& c) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) s += std::hypot(c[i + 1].x - c[i].x, c[i + 1].y - c[i].y);
  return s;
}

// --- assignment -------------------------------------------------------------

struct BruteResult {
  std::size_t matched = 0;
  double cost = 0.0;
};

/// Exhaustive search over all partial injections gen -> ref within `gate`.
/// Maximum cardinality first, then least cost summed in generated order.
inline BruteResult brute_force_assignment(const std::vector<Point2>& gen,
                                          const std::vector<Point2>& ref, double gate) {
  BruteResult best{0, std::numeric_limits<double>::infinity()};
  std::vector<bool> used(ref.size(), false);
  auto rec = [&](auto&& self, std::size_t i, std::size_t matched, double cost) -> void {
    if (i == gen.size()) {
      if (matched > best.matched || (matched == best.matched && cost < best.cost)) best = {matched, cost};
      return;
    }
    self(self, i + 1, matched, cost);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (used[j]) continue;
      const double d = std::hypot(gen[i].x - ref[j].x, gen[i].y - ref[j].y);
      if (d > gate) continue;
      used[j] = true;
      self(self, i + 1, matched + 1, cost + d);
      used[j] = false;
    }
  };
  rec(rec, 0, 0, 0.0);
  if (best.matched == 0) best.cost = 0.0;
  return best;
}

// --- geodesy ----------------------------------------------------------------

inline constexpr double kA = 6378137.0;
inline constexpr double kF = 1.0 / 298.257223563;
inline constexpr double kK0 = 0.9996;

/// Meridian arc length from the equator by composite Simpson quadrature of
/// the meridional radius of curvature.
inline double meridian_arc(double lat_rad) {
  const double e2 = kF * (2.0 - kF);
  const int n = 4000;
  const double h = lat_rad / n;
  auto rho = [&](double p) {
    const double s = std::sin(p);
    return kA * (1.0 - e2) / std::pow(1.0 - e2 * s * s, 1.5);
  };
  double sum = rho(0.0) + rho(lat_rad);
  for (int i = 1; i < n; ++i) sum += rho(i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Classic power series in the longitude offset (A^6 terms), as tabulated for
/// the ellipsoidal transverse Mercator in USGS Professional Paper 1395.
inline std::pair<double, double> tm_series_forward(double lat_deg, double lon_deg, int zone,
                                                   bool south) {
  const double e2 = kF * (2.0 - kF);
  const double ep2 = e2 / (1.0 - e2);
  const double phi = lat_deg * std::numbers::pi / 180.0;
  const double lam0 = (zone * 6.0 - 183.0) * std::numbers::pi / 180.0;
  const double lam = lon_deg * std::numbers::pi / 180.0;
  const double s = std::sin(phi), c = std::cos(phi), t = std::tan(phi);
  const double N = kA / std::sqrt(1.0 - e2 * s * s);
  const double T = t * t;
  const double C = ep2 * c * c;
  const double A = (lam - lam0) * c;
  const double M = meridian_arc(phi);
  const double x =
      kK0 * N * (A + (1 - T + C) * std::pow(A, 3) / 6 + (5 - 18 * T + T * T + 72 * C - 58 * ep2) * std::pow(A, 5) / 120);
  const double y =
      kK0 * (M + N * t * (A * A / 2 + (5 - T + 9 * C + 4 * C * C) * std::pow(A, 4) / 24 +
                          (61 - 58 * T + T * T + 600 * C - 330 * ep2) * std::pow(A, 6) / 720));
  return {500000.0 + x, south ? y + 10000000.0 : y};
}

}  // namespace oracle
