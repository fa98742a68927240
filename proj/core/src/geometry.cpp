#include "hdmap/geometry.hpp"

#include <algorithm>
#include <limits>

namespace hdmap {

Polyline::Polyline(std::vector<Point2> points, Unit unit, bool closed)
    : unit_(unit), closed_(closed) {
  points_.reserve(points.size());
  for (const Point2& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidArgument("polyline coordinates must be finite");
    }
    if (points_.empty() || points_.back() != p) points_.push_back(p);
  }
  if (closed_ && points_.size() > 1 && points_.front() == points_.back()) points_.pop_back();
  if (points_.size() < 2) throw InvalidArgument("polyline needs at least two distinct points");
}

double Polyline::length() const {
  double len = 0.0;
  for (std::size_t i = 0; i < segment_count(); ++i) len += distance(segment_start(i), segment_end(i));
  return len;
}

Polyline Polyline::reversed() const {
  std::vector<Point2> pts(points_.rbegin(), points_.rend());
  return Polyline(std::move(pts), unit_, closed_);
}

Polyline Polyline::translated(Point2 offset) const {
  std::vector<Point2> pts;
  pts.reserve(points_.size());
  for (const Point2& p : points_) pts.push_back(p + offset);
  return Polyline(std::move(pts), unit_, closed_);
}

Polyline Polyline::opened() const {
  std::vector<Point2> pts = points_;
  if (closed_) pts.push_back(points_.front());
  return Polyline(std::move(pts), unit_, false);
}

namespace geometry {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void douglas_peucker(std::span<const Point2> pts, double tol, std::vector<char>& keep) {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, pts.size() - 1}};
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi <= lo + 1) continue;
    double best = -1.0;
    std::size_t best_i = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    if (best > tol) {
      keep[best_i] = 1;
      stack.push_back({best_i, hi});
      stack.push_back({lo, best_i});
    }
  }
}

std::vector<Point2> simplify_open(std::span<const Point2> pts, double tol) {
  std::vector<char> keep(pts.size(), 0);
  keep.front() = keep.back() = 1;
  douglas_peucker(pts, tol, keep);
  std::vector<Point2> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) out.push_back(pts[i]);
  }
  return out;
}

double direction(Point2 a, Point2 b) {
  double t = std::atan2(b.y - a.y, b.x - a.x);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

}  // namespace

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

Polyline simplify(const Polyline& pl, double tolerance) {
  if (!(tolerance > 0.0)) throw InvalidArgument("simplify: tolerance must be positive");
  const auto pts = pl.points();
  if (!pl.closed()) return Polyline(simplify_open(pts, tolerance), pl.unit(), false);

  // Split the ring at the vertex farthest from the first one.
  std::size_t far = 0;
  double best = -1.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = distance(pts[0], pts[i]);
    if (d > best) {
      best = d;
      far = i;
    }
  }
  std::vector<Point2> first(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(far) + 1);
  std::vector<Point2> second(pts.begin() + static_cast<std::ptrdiff_t>(far), pts.end());
  second.push_back(pts[0]);
  std::vector<Point2> a = simplify_open(first, tolerance);
  const std::vector<Point2> b = simplify_open(second, tolerance);
  a.insert(a.end(), b.begin() + 1, b.end() - 1);
  return Polyline(std::move(a), pl.unit(), true);
}

Polyline resample_uniform(const Polyline& pl, double step) {
  if (!(step > 0.0)) throw InvalidArgument("resample_uniform: step must be positive");
  const Polyline open = pl.opened();
  const auto pts = open.points();
  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + distance(pts[i - 1], pts[i]);
  const double total = cum.back();
  if (!(total > 0.0)) throw InvalidArgument("resample_uniform: zero-length polyline");

  std::vector<Point2> out;
  std::size_t seg = 0;
  for (std::size_t k = 0;; ++k) {
    const double s = static_cast<double>(k) * step;
    if (k > 0 && s >= total - 1e-9 * step) break;
    while (seg + 2 < cum.size() && cum[seg + 1] <= s) ++seg;
    const double seg_len = cum[seg + 1] - cum[seg];
    const double t = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
    out.push_back(pts[seg] + t * (pts[seg + 1] - pts[seg]));
  }
  out.push_back(pts.back());
  return Polyline(std::move(out), pl.unit(), false);
}

std::vector<double> segment_orientations(const Polyline& pl) {
  std::vector<double> out;
  out.reserve(pl.segment_count());
  for (std::size_t i = 0; i < pl.segment_count(); ++i) {
    out.push_back(direction(pl.segment_start(i), pl.segment_end(i)));
  }
  return out;
}

double turn_angle(double from, double to) {
  double d = std::fmod(std::abs(to - from), kTwoPi);
  return d > std::numbers::pi ? kTwoPi - d : d;
}

double axial_difference(double a, double b) {
  double d = std::fmod(std::abs(a - b), std::numbers::pi);
  return d > std::numbers::pi / 2.0 ? std::numbers::pi - d : d;
}

std::vector<Polyline> split_on_orientation(const Polyline& pl, double max_turn_deg) {
  if (!(max_turn_deg > 0.0 && max_turn_deg < 180.0)) {
    throw InvalidArgument("split_on_orientation: max_turn must be in (0, 180)");
  }
  const double limit = max_turn_deg * kDegree - 1e-12;  // exact angles count as turns
  const auto pts = pl.points();
  const auto dirs = segment_orientations(pl);
  const std::size_t n = pts.size();

  std::vector<std::size_t> cuts;
  if (pl.closed()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double before = dirs[(i + n - 1) % n];
      if (turn_angle(before, dirs[i]) >= limit) cuts.push_back(i);
    }
    if (cuts.empty()) return {pl};
    std::vector<Polyline> out;
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      const std::size_t from = cuts[c];
      const std::size_t to = cuts[(c + 1) % cuts.size()];
      std::vector<Point2> piece{pts[from]};
      std::size_t i = from;
      do {
        i = (i + 1) % n;
        piece.push_back(pts[i]);
      } while (i != to);
      out.emplace_back(std::move(piece), pl.unit(), false);
    }
    return out;
  }

  std::vector<Polyline> out;
  std::vector<Point2> piece{pts[0]};
  for (std::size_t i = 1; i < n; ++i) {
    piece.push_back(pts[i]);
    if (i + 1 < n && turn_angle(dirs[i - 1], dirs[i]) >= limit) {
      out.emplace_back(std::move(piece), pl.unit(), false);
      piece = {pts[i]};
    }
  }
  out.emplace_back(std::move(piece), pl.unit(), false);
  return out;
}

Projection project(const Polyline& pl, Point2 p) {
  Projection best;
  best.distance = std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i < pl.segment_count(); ++i) {
    const Point2 a = pl.segment_start(i);
    const Point2 b = pl.segment_end(i);
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    const Point2 q = a + t * ab;
    const double d = distance(p, q);
    const double len = std::sqrt(len2);
    if (d < best.distance) best = Projection{q, d, acc + t * len, i, t};
    acc += len;
  }
  return best;
}

double distance_to(const Polyline& pl, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pl.segment_count(); ++i) {
    best = std::min(best, point_segment_distance(p, pl.segment_start(i), pl.segment_end(i)));
  }
  return best;
}

double signed_area(std::span<const Point2> ring) {
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    a += cross(ring[i], ring[(i + 1) % ring.size()]);
  }
  return 0.5 * a;
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) {
    const double v = cross(q - p, r - p);
    return (v > 0.0) - (v < 0.0);
  };
  auto on_segment = [](Point2 p, Point2 q, Point2 r) {
    return std::min(p.x, q.x) <= r.x && r.x <= std::max(p.x, q.x) &&
           std::min(p.y, q.y) <= r.y && r.y <= std::max(p.y, q.y);
  };
  const int o1 = orient(a, b, c);
  const int o2 = orient(a, b, d);
  const int o3 = orient(c, d, a);
  const int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

Point2 point_at(const Polyline& pl, double s) {
  s = std::max(0.0, s);
  for (std::size_t i = 0; i < pl.segment_count(); ++i) {
    const Point2 a = pl.segment_start(i);
    const Point2 b = pl.segment_end(i);
    const double len = distance(a, b);
    if (s <= len) return a + (s / len) * (b - a);
    s -= len;
  }
  return pl.closed() ? pl.front() : pl.back();
}

PrincipalAxes principal_axes(std::span<const Point2> pts) {
  if (pts.empty()) throw InvalidArgument("principal_axes: empty point set");
  const double n = static_cast<double>(pts.size());
  Point2 mean;
  for (const Point2& p : pts) mean = mean + p;
  mean = (1.0 / n) * mean;
  double a = 0.0, b = 0.0, c = 0.0;
  for (const Point2& p : pts) {
    const Point2 d = p - mean;
    a += d.x * d.x;
    b += d.x * d.y;
    c += d.y * d.y;
  }
  a /= n;
  b /= n;
  c /= n;
  const double scale = a + c;
  double theta = std::numbers::pi / 4.0;
  if (std::abs(a - c) > 1e-12 * scale || std::abs(b) > 1e-12 * scale) {
    theta = 0.5 * std::atan2(2.0 * b, a - c);
  }
  const double m = 0.5 * (a + c);
  const double r = std::hypot(0.5 * (a - c), b);
  return PrincipalAxes{mean, {std::cos(theta), std::sin(theta)}, m + r, std::max(0.0, m - r)};
}

}  // namespace geometry
}  // namespace hdmap
