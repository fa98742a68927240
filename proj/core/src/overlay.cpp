#include "hdmap/overlay.hpp"

#include <array>
#include <cmath>
#include <string>

namespace hdmap::overlay {
namespace {

constexpr std::array<std::string_view, 5> kLegend = {"road_border", "curbstone", "solid", "dashed",
                                                     "arrow"};

std::string category_of(const LineString& ls) {
  const auto type = ls.tags.find("type");
  if (type == ls.tags.end()) return "";
  if (type->second == "line_thin" || type->second == "line_thick") {
    const auto sub = ls.tags.find("subtype");
    return sub == ls.tags.end() ? "solid" : sub->second;
  }
  return type->second;
}

void plot(RgbImage& img, Point2 p, Rgb c) {
  const int cx = static_cast<int>(std::lround(p.x));
  const int cy = static_cast<int>(std::lround(p.y));
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx)
      if (img.contains(cx + dx, cy + dy)) img(cx + dx, cy + dy) = c;
}

}  // namespace

Rgb class_colour(ClassId id) {
  switch (id) {
    case ClassId::kIrrelevant: return {0, 0, 0};
    case ClassId::kRoad: return {90, 90, 90};
    case ClassId::kWalkway: return {150, 120, 90};
    case ClassId::kVegetation: return {40, 110, 40};
    case ClassId::kParking: return {70, 70, 120};
    case ClassId::kTrafficIsland: return {110, 140, 60};
    case ClassId::kSymbol: return {230, 230, 230};
    case ClassId::kLaneMarking: return {200, 200, 200};
    case ClassId::kVehicle: return {60, 60, 160};
  }
  return {0, 0, 0};
}

Rgb element_colour(std::string_view category) {
  if (category == "road_border") return {255, 0, 0};
  if (category == "curbstone") return {255, 140, 0};
  if (category == "solid") return {0, 255, 255};
  if (category == "dashed") return {0, 120, 255};
  if (category == "arrow") return {255, 0, 255};
  return {255, 255, 255};
}

OverlayResult render(const SemanticMask& mask, const HdMap& map, const GeoReference& ref) {
  OverlayResult out{RgbImage(mask.width(), mask.height()), 0};
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) out.image(x, y) = class_colour(mask.at(x, y));

  auto draw = [&](const LineString& ls, Rgb colour) {
    std::vector<Point2> px;
    for (const Point2& p : map.geometry(ls)) {
      const Point2 q = geo::utm_to_pixel({p.x, p.y}, ref);
      if (q.x < -0.5 || q.y < -0.5 || q.x > mask.width() - 0.5 || q.y > mask.height() - 0.5) {
        ++out.clipped_vertices;
      }
      px.push_back(q);
    }
    for (std::size_t i = 0; i + 1 < px.size(); ++i) {
      const double len = distance(px[i], px[i + 1]);
      const int steps = std::max(1, static_cast<int>(std::ceil(2.0 * len)));
      for (int k = 0; k <= steps; ++k) {
        plot(out.image, px[i] + (static_cast<double>(k) / steps) * (px[i + 1] - px[i]), colour);
      }
    }
  };
  for (const auto& [id, ls] : map.linestrings) draw(ls, element_colour(category_of(ls)));
  for (const auto& [id, ls] : map.symbols) draw(ls, element_colour("arrow"));

  for (std::size_t i = 0; i < kLegend.size(); ++i) {
    const Rgb c = element_colour(kLegend[i]);
    const int y0 = 4 + static_cast<int>(i) * 14;
    for (int y = y0; y < y0 + 10; ++y)
      for (int x = 4; x < 14; ++x)
        if (out.image.contains(x, y)) out.image(x, y) = c;
  }
  return out;
}

}  // namespace hdmap::overlay
