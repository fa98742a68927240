#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "hdmap/error.hpp"

namespace hdmap {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;
  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

enum class Unit { kPixel, kMetre };

/// Ordered point chain, at least two points, no consecutive duplicates.
/// Closed polylines store each vertex once; the closing segment is implicit.
class Polyline {
 public:
  /// Drops consecutive duplicates (and a duplicated closing point), then
  /// throws InvalidArgument if fewer than two points remain or any
  /// coordinate is non-finite.
  Polyline(std::vector<Point2> points, Unit unit = Unit::kMetre, bool closed = false);

  std::span<const Point2> points() const noexcept { return points_; }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  const Point2& front() const { return points_.front(); }
  const Point2& back() const { return points_.back(); }
  std::size_t size() const noexcept { return points_.size(); }
  bool closed() const noexcept { return closed_; }
  Unit unit() const noexcept { return unit_; }

  /// Number of segments, including the implicit closing one.
  std::size_t segment_count() const noexcept {
    return closed_ ? points_.size() : points_.size() - 1;
  }
  Point2 segment_start(std::size_t i) const { return points_[i]; }
  Point2 segment_end(std::size_t i) const { return points_[(i + 1) % points_.size()]; }

  double length() const;
  Polyline reversed() const;
  Polyline translated(Point2 offset) const;
  /// Open copy; for a closed polyline the first point is repeated at the end.
  Polyline opened() const;

  friend bool operator==(const Polyline&, const Polyline&) = default;

 private:
  std::vector<Point2> points_;
  Unit unit_ = Unit::kMetre;
  bool closed_ = false;
};

inline constexpr double kDegree = std::numbers::pi / 180.0;

namespace geometry {

/// Douglas-Peucker. Keeps endpoints; every dropped vertex lies within
/// `tolerance` of the output chain. Closed polylines are split at the vertex
/// farthest from the first one and simplified as two open halves.
Polyline simplify(const Polyline& pl, double tolerance);

/// Points every `step` of arc length from the first point, plus the final
/// point. Closed polylines are resampled around the full loop. Throws
/// InvalidArgument for zero-length input or step <= 0.
Polyline resample_uniform(const Polyline& pl, double step);

/// One direction per segment (closing segment included), in [0, 2*pi).
std::vector<double> segment_orientations(const Polyline& pl);

/// Unsigned turn between two directions, in [0, pi].
double turn_angle(double from, double to);

/// Difference between two axial directions (theta ~ theta + pi), in [0, pi/2].
double axial_difference(double a, double b);

/// Splits wherever consecutive segments turn by at least `max_turn_deg`.
/// Pieces share the cut vertex. A closed polyline without cuts is returned
/// unchanged; with cuts, the seam is evaluated like any other vertex.
std::vector<Polyline> split_on_orientation(const Polyline& pl, double max_turn_deg);

/// Closest point on the chain and its arc-length parameter.
struct Projection {
  Point2 point;
  double distance = 0.0;
  double arc_length = 0.0;
  std::size_t segment = 0;
  double t = 0.0;  // position within the segment, [0, 1]
};
Projection project(const Polyline& pl, Point2 p);

double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Shortest distance from p to the chain.
double distance_to(const Polyline& pl, Point2 p);

/// Signed area (shoelace over the closed ring). Positive for
/// counter-clockwise order in a y-up frame.
double signed_area(std::span<const Point2> ring);

/// Proper or touching intersection of segments ab and cd.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// Point at arc length s (clamped to [0, length]).
Point2 point_at(const Polyline& pl, double s);

/// Mean and dominant direction of a point cloud (population covariance).
/// An isotropic spread has no dominant direction; the diagonal (1, 1)/sqrt(2)
/// is reported so results stay deterministic.
struct PrincipalAxes {
  Point2 mean;
  Point2 major;  // unit vector
  double major_variance = 0.0;
  double minor_variance = 0.0;
};
/// Throws InvalidArgument for an empty input.
PrincipalAxes principal_axes(std::span<const Point2> pts);

}  // namespace geometry
}  // namespace hdmap
