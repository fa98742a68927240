#include "hdmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>

#include "hdmap/keyvalue.hpp"

namespace hdmap {

std::string_view to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::kStraight: return "straight";
    case SceneKind::kCurve: return "curve";
    case SceneKind::kIntersection: return "intersection";
    case SceneKind::kRoundabout: return "roundabout";
  }
  return "straight";
}

void SceneSpec::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("scene spec: ") + what);
  };
  require(lanes >= 1 && lanes <= 4, "lanes must be in [1, 4]");
  require(lane_width >= 2.5 && lane_width <= 5.0, "lane_width must be in [2.5, 5]");
  require(dash_length > 0.0 && dash_gap > 0.0, "dash pattern must be positive");
  require(marking_width > 0.0 && marking_width < 1.0, "marking_width must be in (0, 1)");
  require(arrows >= 0 && occlusions >= 0, "counts must be non-negative");
  require(sidewalk_width > 0.0, "sidewalk_width must be positive");
  require(tile_size >= 64 && tile_size <= 8000, "tile_size must be in [64, 8000]");
  require(gsd > 0.0 && gsd <= 1.0, "gsd must be in (0, 1]");
  require(std::isnan(radius) || radius >= 20.0, "radius must be at least 20 m");
  require(std::isnan(heading_deg) || std::isfinite(heading_deg), "heading must be finite");
}

namespace synth {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kArrowLength = 4.5;
constexpr double kFillet = 6.0;
constexpr double kStopGap = 1.0;

Point2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }
Point2 left_of(Point2 d) { return {-d.y, d.x}; }

// Carriageway reference line: a straight ray or a counter-clockwise arc.
// Lateral offsets are positive to the left of the direction of increasing s.
struct Axis {
  bool arc = false;
  Point2 origin;
  Point2 dir{1.0, 0.0};
  Point2 centre;
  double radius = 0.0;
  double angle0 = 0.0;

  Point2 point(double s, double t) const {
    if (!arc) return origin + s * dir + t * left_of(dir);
    return centre + (radius - t) * unit(angle0 + s / radius);
  }
  Point2 tangent(double s) const {
    if (!arc) return dir;
    return left_of(unit(angle0 + s / radius));
  }
  double lateral(Point2 p) const {
    if (!arc) return cross(dir, p - origin);
    return radius - distance(p, centre);
  }
};

class Canvas {
 public:
  Canvas(int size, double gsd) : mask_(size, size, ClassId::kVegetation), gsd_(gsd) {}

  Point2 centre_of(int x, int y) const { return {(x + 0.5) * gsd_, -(y + 0.5) * gsd_}; }

  void fill(const std::function<std::optional<ClassId>(Point2)>& f) {
    for (int y = 0; y < mask_.height(); ++y) {
      for (int x = 0; x < mask_.width(); ++x) {
        if (auto c = f(centre_of(x, y))) mask_.set(x, y, *c);
      }
    }
  }

  void stroke(std::span<const Point2> pts, double half_width, ClassId cls) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Point2 a = pts[i];
      const Point2 b = pts[i + 1];
      for_box(std::min(a.x, b.x) - half_width, std::max(a.x, b.x) + half_width,
              std::min(a.y, b.y) - half_width, std::max(a.y, b.y) + half_width,
              [&](int x, int y, Point2 p) {
                if (geometry::point_segment_distance(p, a, b) <= half_width) mask_.set(x, y, cls);
              });
    }
  }

  void polygon(std::span<const Point2> poly, ClassId cls) {
    double x0 = poly[0].x, x1 = x0, y0 = poly[0].y, y1 = y0;
    for (const Point2& p : poly) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    for_box(x0, x1, y0, y1, [&](int x, int y, Point2 p) {
      if (symbols::inside_convex(poly, p)) mask_.set(x, y, cls);
    });
  }

  SemanticMask take() { return std::move(mask_); }

 private:
  template <typename F>
  void for_box(double mx0, double mx1, double my0, double my1, F&& f) {
    const int px0 = std::max(0, static_cast<int>(std::floor(mx0 / gsd_ - 0.5)));
    const int px1 = std::min(mask_.width() - 1, static_cast<int>(std::ceil(mx1 / gsd_ - 0.5)));
    const int py0 = std::max(0, static_cast<int>(std::floor(-my1 / gsd_ - 0.5)));
    const int py1 = std::min(mask_.height() - 1, static_cast<int>(std::ceil(-my0 / gsd_ - 0.5)));
    for (int y = py0; y <= py1; ++y)
      for (int x = px0; x <= px1; ++x) f(x, y, centre_of(x, y));
  }

  SemanticMask mask_;
  double gsd_;
};

// Liang-Barsky for one segment; returns the clipped parameter range.
std::optional<std::pair<double, double>> clip_segment(Point2 a, Point2 b, Point2 lo, Point2 hi) {
  double t0 = 0.0, t1 = 1.0;
  const Point2 d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - lo.x, hi.x - a.x, a.y - lo.y, hi.y - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return std::nullopt;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return std::nullopt;
  }
  return std::pair{t0, t1};
}

class SceneBuilder {
 public:
  explicit SceneBuilder(const SceneSpec& spec)
      : spec_(spec),
        rng_(spec.seed),
        canvas_(spec.tile_size, spec.gsd),
        extent_(spec.tile_size * spec.gsd),
        half_(0.5 * spec.lanes * spec.lane_width) {
    scene_.spec = spec;
    scene_.georef.utm_zone = 32;
    scene_.georef.hemisphere = Hemisphere::kNorth;
    scene_.georef.gsd = spec.gsd;
    scene_.georef.origin_easting = 294000.0 + 100.0 * static_cast<double>(spec.seed % 50);
    scene_.georef.origin_northing = 5628000.0 + 100.0 * static_cast<double>(spec.seed % 37);
    heading_ = std::isnan(spec.heading_deg) ? uniform(0.0, 2.0 * kPi) : spec.heading_deg * kDegree;
  }

  SyntheticScene build() {
    switch (spec_.kind) {
      case SceneKind::kStraight:
      case SceneKind::kCurve:
        carriageway();
        break;
      case SceneKind::kIntersection:
        intersection();
        break;
      case SceneKind::kRoundabout:
        roundabout();
        break;
    }
    scene_.mask = canvas_.take();
    scene_.reference.validate();
    return std::move(scene_);
  }

 private:
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }

  Point2 centre() const { return {0.5 * extent_, -0.5 * extent_}; }
  Point2 box_lo() const { return {0.0, -extent_}; }
  Point2 box_hi() const { return {extent_, 0.0}; }
  bool inside(Point2 p, double margin) const {
    return p.x >= margin && p.x <= extent_ - margin && p.y <= -margin && p.y >= -extent_ + margin;
  }

  ElementId node(Point2 local) {
    return scene_.reference.add_utm_point(
        {scene_.georef.origin_easting + local.x, scene_.georef.origin_northing + local.y},
        scene_.georef);
  }

  ElementId way(std::span<const Point2> pts, Tags tags) {
    std::vector<ElementId> ids;
    for (const Point2& p : pts) ids.push_back(node(p));
    return scene_.reference.add_linestring(std::move(ids), std::move(tags));
  }

  // Clipped reference line; returns the id of the first visible run.
  std::optional<ElementId> clipped_way(std::span<const Point2> pts, const Tags& tags) {
    std::optional<ElementId> first;
    for (const auto& run : clip_polyline(pts, box_lo(), box_hi())) {
      double len = 0.0;
      for (std::size_t i = 1; i < run.size(); ++i) len += distance(run[i - 1], run[i]);
      if (len < 0.05) continue;
      const ElementId id = way(run, tags);
      if (!first) first = id;
    }
    return first;
  }

  Tags border_tags() const {
    if (spec_.sidewalk) return {{"type", "curbstone"}, {"subtype", "high"}};
    return {{"type", "road_border"}};
  }

  static std::vector<Point2> sample(const Axis& ax, double t, double s0, double s1, double step) {
    std::vector<Point2> pts;
    const int n = std::max(1, static_cast<int>(std::ceil((s1 - s0) / step)));
    for (int i = 0; i <= n; ++i) pts.push_back(ax.point(s0 + (s1 - s0) * i / n, t));
    return pts;
  }

  double sample_step(const Axis& ax) const { return ax.arc ? 0.5 : 2.0; }

  // Lane dividers along `ax` for s in [s0, s1]; returns reference ids per divider.
  std::vector<std::optional<ElementId>> dividers(const Axis& ax, double s0, double s1) {
    std::vector<std::optional<ElementId>> ids;
    const double hw = 0.5 * spec_.marking_width;
    for (int k = 1; k < spec_.lanes; ++k) {
      const double t = -half_ + k * spec_.lane_width;
      if (spec_.divider == MarkingKind::kSolid) {
        const auto pts = sample(ax, t, s0, s1, sample_step(ax));
        canvas_.stroke(pts, hw, ClassId::kLaneMarking);
        ids.push_back(clipped_way(pts, {{"type", "line_thin"}, {"subtype", "solid"}}));
        continue;
      }
      const double period = spec_.dash_length + spec_.dash_gap;
      std::vector<Point2> centroids;
      std::vector<Point2> only_dash;
      for (double a = s0 + uniform(0.0, period); a + spec_.dash_length <= s1; a += period) {
        const auto pts = sample(ax, t, a, a + spec_.dash_length, 0.25);
        // Dashes cut by the tile edge are not painted.
        const bool visible = std::all_of(pts.begin(), pts.end(),
                                         [&](Point2 p) { return inside(p, 0.3 + hw); });
        if (!visible) continue;
        canvas_.stroke(pts, hw, ClassId::kLaneMarking);
        centroids.push_back(ax.point(a + 0.5 * spec_.dash_length, t));
        only_dash = {pts.front(), pts.back()};
      }
      const int count = static_cast<int>(centroids.size());
      if (count == 0) {
        ids.push_back(std::nullopt);
        continue;
      }
      scene_.dash_counts.push_back(count);
      Tags tags{{"type", "line_thin"}, {"subtype", "dashed"}, {"dash_count", std::to_string(count)}};
      ids.push_back(way(count >= 2 ? centroids : only_dash, std::move(tags)));
    }
    return ids;
  }

  SymbolClass random_arrow_class() {
    return kAllSymbolClasses[static_cast<std::size_t>(uniform_int(0, 5))];
  }

  // Tries to place one arrow in lane `lane` of `ax` over s in [s0, s1].
  std::optional<PlacedArrow> place_arrow(const Axis& ax, int lane, double sign, double s0, double s1) {
    const double t = -half_ + (lane + 0.5) * spec_.lane_width;
    for (int attempt = 0; attempt < 100; ++attempt) {
      const double s = uniform(s0, s1);
      const Point2 c = ax.point(s, t);
      const Point2 dir = sign * ax.tangent(s);
      const Point2 tail = c - (0.5 * kArrowLength) * dir;
      const Point2 tip = c + (0.5 * kArrowLength) * dir;
      const SymbolClass cls = random_arrow_class();
      const auto polys = symbols::arrow_polygons(cls, tail, tip);
      bool ok = true;
      for (const auto& poly : polys)
        for (const Point2& p : poly) ok = ok && inside(p, 0.5);
      for (const Point2& other : arrow_centres_) ok = ok && distance(other, c) > kArrowLength + 1.5;
      if (!ok) continue;
      for (const auto& poly : polys) canvas_.polygon(poly, ClassId::kSymbol);
      arrow_centres_.push_back(c);
      const Point2 t_utm{scene_.georef.origin_easting + tail.x, scene_.georef.origin_northing + tail.y};
      const Point2 h_utm{scene_.georef.origin_easting + tip.x, scene_.georef.origin_northing + tip.y};
      return PlacedArrow{cls, t_utm, h_utm, lane};
    }
    return std::nullopt;
  }

  ElementId arrow_way(const PlacedArrow& a) {
    const Point2 origin{scene_.georef.origin_easting, scene_.georef.origin_northing};
    const ElementId tail = node(a.tail - origin);
    const ElementId tip = node(a.tip - origin);
    return scene_.reference.add_symbol(tail, tip,
                                       {{"type", "arrow"}, {"subtype", std::string(to_string(a.cls))}});
  }

  void vehicles(const std::vector<Axis>& axes, double s0, double s1) {
    for (int v = 0; v < spec_.occlusions; ++v) {
      const Axis& ax = axes[static_cast<std::size_t>(uniform_int(0, static_cast<int>(axes.size()) - 1))];
      const int lane = uniform_int(0, spec_.lanes - 1);
      const double t = -half_ + (lane + 0.5) * spec_.lane_width + uniform(-0.6, 0.6);
      const double s = uniform(s0, s1);
      const Point2 c = ax.point(s, t);
      const Point2 d = ax.tangent(s);
      const Point2 n = left_of(d);
      const std::vector<Point2> rect{c - 2.25 * d - 0.95 * n, c + 2.25 * d - 0.95 * n,
                                     c + 2.25 * d + 0.95 * n, c - 2.25 * d + 0.95 * n};
      canvas_.polygon(rect, ClassId::kVehicle);
    }
  }

  // Arms leading away from a junction: dividers, incoming-lane arrows.
  void arms(const std::vector<Axis>& axes, double length) {
    for (const Axis& ax : axes) dividers(ax, 0.0, length);
    for (int a = 0; a < spec_.arrows; ++a) {
      const Axis& ax = axes[static_cast<std::size_t>(uniform_int(0, static_cast<int>(axes.size()) - 1))];
      // Incoming traffic keeps right, i.e. drives on the left of the outward axis.
      const int lane = spec_.lanes == 1 ? 0 : uniform_int(spec_.lanes / 2 + spec_.lanes % 2, spec_.lanes - 1);
      if (auto placed = place_arrow(ax, lane, -1.0, 2.0 + kArrowLength, length)) {
        arrow_way(*placed);
        scene_.arrows.push_back(*placed);
      }
    }
    vehicles(axes, 0.0, length);
  }

  void carriageway() {
    Axis ax;
    const double reach = extent_;
    if (spec_.kind == SceneKind::kCurve) {
      const double r = std::isnan(spec_.radius) ? uniform(80.0, 200.0) : spec_.radius;
      ax.arc = true;
      ax.radius = r;
      ax.centre = centre() + r * left_of(unit(heading_));
      const Point2 rel = centre() - ax.centre;
      ax.angle0 = std::atan2(rel.y, rel.x);
    } else {
      ax.origin = centre();
      ax.dir = unit(heading_);
    }
    const double sw = spec_.sidewalk_width;
    const double h = half_;
    const bool sidewalk = spec_.sidewalk;
    canvas_.fill([&](Point2 p) -> std::optional<ClassId> {
      const double t = std::abs(ax.lateral(p));
      if (t <= h) return ClassId::kRoad;
      if (sidewalk && t <= h + sw) return ClassId::kWalkway;
      return std::nullopt;
    });

    std::vector<std::optional<ElementId>> bounds;
    bounds.push_back(clipped_way(sample(ax, -h, -reach, reach, sample_step(ax)), border_tags()));
    for (auto& id : dividers(ax, -reach, reach)) bounds.push_back(id);
    bounds.push_back(clipped_way(sample(ax, h, -reach, reach, sample_step(ax)), border_tags()));

    std::vector<std::vector<ElementId>> lane_symbols(static_cast<std::size_t>(spec_.lanes));
    for (int a = 0; a < spec_.arrows; ++a) {
      const int lane = uniform_int(0, spec_.lanes - 1);
      const double t = -h + (lane + 0.5) * spec_.lane_width;
      const double sign = t > 1e-9 ? -1.0 : 1.0;
      if (auto placed = place_arrow(ax, lane, sign, -reach, reach)) {
        lane_symbols[static_cast<std::size_t>(lane)].push_back(arrow_way(*placed));
        scene_.arrows.push_back(*placed);
      }
    }
    vehicles({ax}, -reach, reach);

    for (int lane = 0; lane < spec_.lanes; ++lane) {
      const auto& right = bounds[static_cast<std::size_t>(lane)];
      const auto& left = bounds[static_cast<std::size_t>(lane) + 1];
      if (!right || !left) continue;
      scene_.reference.add_lanelet(*left, *right, lane_symbols[static_cast<std::size_t>(lane)],
                                   {{"type", "lanelet"}, {"subtype", "road"}});
    }
  }

  void intersection() {
    const Point2 c = centre();
    const Point2 e1 = unit(heading_);
    const Point2 e2 = left_of(e1);
    const double h = half_;
    const double rf = kFillet;
    const double sw = spec_.sidewalk_width;
    const bool sidewalk = spec_.sidewalk;
    canvas_.fill([&](Point2 p) -> std::optional<ClassId> {
      const double a = std::abs(dot(p - c, e1)) - h;
      const double b = std::abs(dot(p - c, e2)) - h;
      if (a <= 0.0 || b <= 0.0) return ClassId::kRoad;
      const double corner = distance({a, b}, {rf, rf});
      if (a < rf && b < rf && corner > rf) return ClassId::kRoad;
      const double d = (a >= rf || b >= rf) ? std::min(a, b) : rf - corner;
      if (sidewalk && d <= sw) return ClassId::kWalkway;
      return std::nullopt;
    });

    const double far = extent_;
    for (double sa : {-1.0, 1.0}) {
      for (double sb : {-1.0, 1.0}) {
        auto at = [&](double a, double b) { return c + (sa * a) * e1 + (sb * b) * e2; };
        std::vector<Point2> pts{at(far, h)};
        for (int i = 0; i <= 24; ++i) {
          const double phi = -0.5 * kPi - 0.5 * kPi * i / 24.0;  // from (0,-1) to (-1,0)
          pts.push_back(at(h + rf + rf * std::cos(phi), h + rf + rf * std::sin(phi)));
        }
        pts.push_back(at(h, far));
        clipped_way(pts, border_tags());
      }
    }

    std::vector<Axis> axes;
    for (Point2 d : {e1, -1.0 * e1, e2, -1.0 * e2}) {
      Axis ax;
      ax.dir = d;
      ax.origin = c + (h + rf + kStopGap) * d;
      axes.push_back(ax);
    }
    arms(axes, far);
  }

  void roundabout() {
    const Point2 c = centre();
    const double ri = 7.0;
    const double ro = ri + 1.5 * spec_.lane_width;
    const double h = std::min(half_, 0.8 * ro);
    const double sw = spec_.sidewalk_width;
    const bool sidewalk = spec_.sidewalk;
    std::vector<Point2> dirs;
    for (int k = 0; k < 4; ++k) dirs.push_back(unit(heading_ + 0.5 * kPi * k));
    canvas_.fill([&](Point2 p) -> std::optional<ClassId> {
      const double r = distance(p, c);
      if (r < ri) return ClassId::kTrafficIsland;
      if (r <= ro) return ClassId::kRoad;
      double d = r - ro;
      for (const Point2& dir : dirs) {
        if (dot(p - c, dir) <= 0.0) continue;
        const double lat = std::abs(cross(dir, p - c)) - h;
        if (lat <= 0.0) return ClassId::kRoad;
        d = std::min(d, lat);
      }
      if (sidewalk && d <= sw) return ClassId::kWalkway;
      return std::nullopt;
    });

    std::vector<Point2> island;
    for (int i = 0; i < 96; ++i) island.push_back(c + ri * unit(2.0 * kPi * i / 96.0));
    island.push_back(island.front());
    way(island, {{"type", "road_border"}});

    const double far = extent_;
    const double delta = std::asin(h / ro);
    const double reach = std::sqrt(ro * ro - h * h);
    for (int k = 0; k < 4; ++k) {
      const Point2 d0 = dirs[static_cast<std::size_t>(k)];
      const Point2 d1 = dirs[static_cast<std::size_t>((k + 1) % 4)];
      std::vector<Point2> pts{c + far * d0 + h * left_of(d0), c + reach * d0 + h * left_of(d0)};
      const double a0 = heading_ + 0.5 * kPi * k + delta;
      const double a1 = heading_ + 0.5 * kPi * (k + 1) - delta;
      for (int i = 1; i < 24; ++i) pts.push_back(c + ro * unit(a0 + (a1 - a0) * i / 24.0));
      pts.push_back(c + reach * d1 - h * left_of(d1));
      pts.push_back(c + far * d1 - h * left_of(d1));
      clipped_way(pts, border_tags());
    }

    std::vector<Axis> axes;
    for (const Point2& d : dirs) {
      Axis ax;
      ax.dir = d;
      ax.origin = c + (ro + 2.0) * d;
      axes.push_back(ax);
    }
    arms(axes, far);
  }

  const SceneSpec& spec_;
  std::mt19937_64 rng_;
  Canvas canvas_;
  double extent_;
  double half_;
  double heading_ = 0.0;
  std::vector<Point2> arrow_centres_;
  SyntheticScene scene_;
};

std::optional<SceneKind> kind_from_string(std::string_view s) {
  for (SceneKind k : {SceneKind::kStraight, SceneKind::kCurve, SceneKind::kIntersection,
                      SceneKind::kRoundabout}) {
    if (to_string(k) == s) return k;
  }
  if (s == "roundabout-lite") return SceneKind::kRoundabout;
  return std::nullopt;
}

double parse_optional(const std::string& key, const std::string& value) {
  if (value == "random") return std::numeric_limits<double>::quiet_NaN();
  return parse_double(key, value);
}

std::string format_optional(double v) { return std::isnan(v) ? "random" : format_double(v); }

}  // namespace

SceneSpec parse_scene_spec(std::string_view text) {
  SceneSpec spec;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key == "kind") {
      const auto k = kind_from_string(value);
      if (!k) throw InputError("unknown scene kind '" + value + "'");
      spec.kind = *k;
    } else if (key == "lanes") {
      spec.lanes = parse_int(key, value);
    } else if (key == "lane_width") {
      spec.lane_width = parse_double(key, value);
    } else if (key == "marking") {
      if (value == "dashed") {
        spec.divider = MarkingKind::kDashed;
      } else if (value == "solid") {
        spec.divider = MarkingKind::kSolid;
      } else {
        throw InputError("marking must be dashed or solid");
      }
    } else if (key == "dash_length") {
      spec.dash_length = parse_double(key, value);
    } else if (key == "dash_gap") {
      spec.dash_gap = parse_double(key, value);
    } else if (key == "marking_width") {
      spec.marking_width = parse_double(key, value);
    } else if (key == "arrows") {
      spec.arrows = parse_int(key, value);
    } else if (key == "occlusions") {
      spec.occlusions = parse_int(key, value);
    } else if (key == "sidewalk") {
      if (value != "yes" && value != "no") throw InputError("sidewalk must be yes or no");
      spec.sidewalk = value == "yes";
    } else if (key == "sidewalk_width") {
      spec.sidewalk_width = parse_double(key, value);
    } else if (key == "tile_size") {
      spec.tile_size = parse_int(key, value);
    } else if (key == "gsd") {
      spec.gsd = parse_double(key, value);
    } else if (key == "heading") {
      spec.heading_deg = parse_optional(key, value);
    } else if (key == "radius") {
      spec.radius = parse_optional(key, value);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else {
      throw InputError("unknown scene key '" + key + "'");
    }
  }
  try {
    spec.validate();
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
  return spec;
}

SceneSpec load_scene_spec(const std::string& path) {
  try {
    return parse_scene_spec(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_scene_spec(const SceneSpec& s) {
  std::string out;
  out += "kind=" + std::string(to_string(s.kind)) + "\n";
  out += "lanes=" + std::to_string(s.lanes) + "\n";
  out += "lane_width=" + format_double(s.lane_width) + "\n";
  out += "marking=" + std::string(to_string(s.divider)) + "\n";
  out += "dash_length=" + format_double(s.dash_length) + "\n";
  out += "dash_gap=" + format_double(s.dash_gap) + "\n";
  out += "marking_width=" + format_double(s.marking_width) + "\n";
  out += "arrows=" + std::to_string(s.arrows) + "\n";
  out += "occlusions=" + std::to_string(s.occlusions) + "\n";
  out += std::string("sidewalk=") + (s.sidewalk ? "yes" : "no") + "\n";
  out += "sidewalk_width=" + format_double(s.sidewalk_width) + "\n";
  out += "tile_size=" + std::to_string(s.tile_size) + "\n";
  out += "gsd=" + format_double(s.gsd) + "\n";
  out += "heading=" + format_optional(s.heading_deg) + "\n";
  out += "radius=" + format_optional(s.radius) + "\n";
  out += "seed=" + std::to_string(s.seed) + "\n";
  return out;
}

SyntheticScene generate(const SceneSpec& spec) {
  spec.validate();
  return SceneBuilder(spec).build();
}

SemanticMask perturb(const SemanticMask& mask, double flip_probability, std::uint64_t seed) {
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) {
    throw InvalidArgument("perturb: probability must be in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  SemanticMask out = mask;
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      ClassId options[4];
      int n = 0;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + kDx[k];
        const int ny = y + kDy[k];
        if (mask.contains(nx, ny) && mask.at(nx, ny) != mask.at(x, y)) options[n++] = mask.at(nx, ny);
      }
      if (n == 0) continue;
      if (coin(rng) < flip_probability) {
        out.set(x, y, options[std::uniform_int_distribution<int>(0, n - 1)(rng)]);
      }
    }
  }
  return out;
}

std::vector<std::vector<Point2>> clip_polyline(std::span<const Point2> pts, Point2 lo, Point2 hi) {
  std::vector<std::vector<Point2>> runs;
  std::vector<Point2> run;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto range = clip_segment(pts[i], pts[i + 1], lo, hi);
    if (!range) {
      if (run.size() >= 2) runs.push_back(std::move(run));
      run.clear();
      continue;
    }
    const Point2 d = pts[i + 1] - pts[i];
    const Point2 a = pts[i] + range->first * d;
    const Point2 b = pts[i] + range->second * d;
    if (run.empty() || run.back() != a) {
      if (run.size() >= 2) runs.push_back(std::move(run));
      run = {a};
    }
    if (b != run.back()) run.push_back(b);
    if (range->second < 1.0) {
      if (run.size() >= 2) runs.push_back(std::move(run));
      run.clear();
    }
  }
  if (run.size() >= 2) runs.push_back(std::move(run));
  return runs;
}

}  // namespace synth
}  // namespace hdmap
