#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hdmap/georef.hpp"
#include "hdmap/lanelet2_io.hpp"
#include "hdmap/marking.hpp"
#include "hdmap/raster.hpp"
#include "hdmap/symbols.hpp"

namespace hdmap {

enum class SceneKind { kStraight, kCurve, kIntersection, kRoundabout };

std::string_view to_string(SceneKind kind);

/// Synthetic tile description. NaN heading/radius are drawn from the seed.
struct SceneSpec {
  SceneKind kind = SceneKind::kStraight;
  int lanes = 2;
  double lane_width = 3.5;
  MarkingKind divider = MarkingKind::kDashed;
  double dash_length = 3.0;
  double dash_gap = 5.0;
  double marking_width = 0.15;
  int arrows = 1;
  int occlusions = 0;
  bool sidewalk = true;
  double sidewalk_width = 2.0;
  int tile_size = 1000;  // pixels per side
  double gsd = 0.05;
  double heading_deg = std::numeric_limits<double>::quiet_NaN();
  double radius = std::numeric_limits<double>::quiet_NaN();  // curve centreline radius, metres
  std::uint64_t seed = 0;

  /// Throws InvalidArgument for out-of-range values.
  void validate() const;
};

struct PlacedArrow {
  SymbolClass cls = SymbolClass::kStraight;
  Point2 tail;  // UTM
  Point2 tip;
  int lane = 0;  // index across the carriageway, lowest lateral offset first
};

struct SyntheticScene {
  SceneSpec spec;
  SemanticMask mask{1, 1};
  GeoReference georef;
  HdMap reference;
  std::vector<PlacedArrow> arrows;
  std::vector<int> dash_counts;  // per emitted dashed reference line
};

namespace synth {

SceneSpec parse_scene_spec(std::string_view text);
SceneSpec load_scene_spec(const std::string& path);
std::string format_scene_spec(const SceneSpec& spec);

/// Deterministic for equal spec (seed included).
SyntheticScene generate(const SceneSpec& spec);

/// Each pixel with a 4-neighbour of another class takes, with probability
/// `flip_probability`, the class of one such neighbour chosen at random.
/// Decisions are made against the unmodified input.
SemanticMask perturb(const SemanticMask& mask, double flip_probability, std::uint64_t seed);

/// Clips a polyline to an axis-aligned box, returning the inside runs.
std::vector<std::vector<Point2>> clip_polyline(std::span<const Point2> pts, Point2 lo, Point2 hi);

}  // namespace synth
}  // namespace hdmap
