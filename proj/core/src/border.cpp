#include "hdmap/border.hpp"

#include <cmath>

namespace hdmap {

std::string_view to_string(BorderKind kind) {
  return kind == BorderKind::kCurbstone ? "curbstone" : "road_border";
}

namespace border {
namespace {

bool is_drivable(ClassId c) {
  return c == ClassId::kRoad || c == ClassId::kLaneMarking || c == ClassId::kSymbol;
}

// Both pixels on the same edge of the raster frame.
bool along_frame(Pixel a, Pixel b, int w, int h) {
  return (a.x == 0 && b.x == 0) || (a.y == 0 && b.y == 0) || (a.x == w - 1 && b.x == w - 1) ||
         (a.y == h - 1 && b.y == h - 1);
}

Polyline to_pixel_polyline(std::span<const Pixel> px) {
  std::vector<Point2> pts;
  pts.reserve(px.size());
  for (const Pixel& p : px) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  return Polyline(std::move(pts), Unit::kPixel, false);
}

// Splits a closed pixel contour into open runs that avoid frame segments.
// Returns the contour itself (closed) when it never touches the frame.
std::vector<Polyline> open_at_frame(const std::vector<Pixel>& ring, int w, int h) {
  const std::size_t n = ring.size();
  std::vector<char> frame_seg(n, 0);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    frame_seg[i] = along_frame(ring[i], ring[(i + 1) % n], w, h);
    any = any || frame_seg[i];
  }
  std::vector<Polyline> out;
  if (!any) {
    std::vector<Point2> pts;
    for (const Pixel& p : ring) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    out.emplace_back(std::move(pts), Unit::kPixel, true);
    return out;
  }
  // Start right after a frame segment so runs do not wrap.
  std::size_t start = 0;
  while (!frame_seg[start]) ++start;
  std::vector<Pixel> run;
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t i = (start + k) % n;
    if (run.empty()) run.push_back(ring[i]);
    if (frame_seg[i]) {
      if (run.size() >= 2) out.push_back(to_pixel_polyline(run));
      run.clear();
    } else {
      run.push_back(ring[(i + 1) % n]);
    }
  }
  if (run.size() >= 2) out.push_back(to_pixel_polyline(run));
  return out;
}

ClassId class_at(const SemanticMask& mask, Point2 px) {
  const int x = static_cast<int>(std::lround(px.x));
  const int y = static_cast<int>(std::lround(px.y));
  if (!mask.contains(x, y)) return ClassId::kIrrelevant;
  return mask.at(x, y);
}

bool drivable_at(const SemanticMask& mask, Point2 px) { return is_drivable(class_at(mask, px)); }

}  // namespace

BinaryMask drivable_mask(const SemanticMask& mask) {
  return raster::class_mask(mask, {ClassId::kRoad, ClassId::kLaneMarking, ClassId::kSymbol});
}

std::vector<Polyline> extract_borders(const BinaryMask& drivable, const GeoReference& ref,
                                      const BorderParams& params) {
  std::vector<Polyline> out;
  // Label noise along the area boundary would otherwise split every border
  // at the 1 px dents it leaves behind.
  const BinaryMask smooth = raster::majority_filter(drivable);
  for (const raster::Contour& contour : raster::trace_contours(smooth)) {
    if (contour.pixels.size() < 2) continue;
    for (const Polyline& run : open_at_frame(contour.pixels, drivable.width(), drivable.height())) {
      // Simplify on exact integer pixel coordinates; UTM magnitudes would
      // turn one-pixel bumps into tolerance ties decided by rounding.
      const Polyline simple = geo::pixels_to_utm(
          geometry::simplify(run, params.simplify_tolerance / ref.gsd), ref);
      for (Polyline& piece : geometry::split_on_orientation(simple, params.max_turn_deg)) {
        if (piece.length() >= params.min_length) out.push_back(std::move(piece));
      }
    }
  }
  return out;
}

BorderKind classify_border(const Polyline& line, const SemanticMask& mask, const GeoReference& ref,
                           double probe_dist, double walkway_fraction, double probe_step) {
  if (!(probe_dist > 0.0)) throw InvalidArgument("classify_border: probe_dist must be positive");
  if (!(probe_step > 0.0)) throw InvalidArgument("classify_border: probe_step must be positive");
  const Polyline open = line.opened();
  const double len = open.length();
  const auto stations = static_cast<std::size_t>(std::max(1.0, std::ceil(len / probe_step)));
  const double half = 0.5 * ref.gsd;
  const int reach = std::max(1, static_cast<int>(std::lround(probe_dist / ref.gsd)));

  std::size_t valid = 0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k <= stations; ++k) {
    const double s = len * static_cast<double>(k) / static_cast<double>(stations);
    const Point2 a = geometry::point_at(open, std::max(0.0, s - half));
    const Point2 b = geometry::point_at(open, std::min(len, s + half));
    const Point2 t = b - a;
    const double tn = norm(t);
    if (tn == 0.0) continue;
    const Point2 centre_utm = geometry::point_at(open, s);
    // Work in pixel space: image y grows downward.
    const Point2 c = geo::utm_to_pixel({centre_utm.x, centre_utm.y}, ref);
    const Point2 tangent_px{t.x / tn, -t.y / tn};
    Point2 normal{-tangent_px.y, tangent_px.x};
    const bool plus = drivable_at(mask, c + normal);
    const bool minus = drivable_at(mask, c - normal);
    if (plus == minus) continue;  // no clear drivable side at this station
    if (plus) normal = -1.0 * normal;
    ++valid;
    for (int step = 1; step <= reach; ++step) {
      if (class_at(mask, c + static_cast<double>(step) * normal) == ClassId::kWalkway) {
        ++hits;
        break;
      }
    }
  }
  if (valid == 0) return BorderKind::kRoadBorder;
  return static_cast<double>(hits) >= walkway_fraction * static_cast<double>(valid)
             ? BorderKind::kCurbstone
             : BorderKind::kRoadBorder;
}

std::vector<RoadBorder> extract_road_borders(const SemanticMask& mask, const GeoReference& ref,
                                             const BorderParams& params) {
  std::vector<RoadBorder> out;
  for (Polyline& line : extract_borders(drivable_mask(mask), ref, params)) {
    const BorderKind kind = classify_border(line, mask, ref, params.probe_dist,
                                            params.walkway_fraction, params.probe_step);
    out.push_back(RoadBorder{std::move(line), kind});
  }
  return out;
}

}  // namespace border
}  // namespace hdmap
