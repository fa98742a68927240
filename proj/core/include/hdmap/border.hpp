#pragma once

#include <string_view>
#include <vector>

#include "hdmap/georef.hpp"
#include "hdmap/raster.hpp"

namespace hdmap {

enum class BorderKind { kRoadBorder, kCurbstone };

std::string_view to_string(BorderKind kind);

struct RoadBorder {
  Polyline line;  // UTM metres
  BorderKind kind = BorderKind::kRoadBorder;
};

namespace border {

struct BorderParams {
  double max_turn_deg = 45.0;
  double simplify_tolerance = 0.05;  // metres
  double min_length = 0.5;           // metres; shorter pieces are dropped
  double probe_dist = 0.5;           // metres
  double probe_step = 0.25;          // metres between probes along the border
  double walkway_fraction = 0.5;

  friend bool operator==(const BorderParams&, const BorderParams&) = default;
};

/// Union of road, lane_marking and symbol.
BinaryMask drivable_mask(const SemanticMask& mask);

/// Traces the drivable area's contours (holes included) after one 3x3
/// majority pass, opens them where they run along the raster frame (tile
/// cuts, not physical borders), converts to UTM, simplifies and splits at
/// sharp orientation changes.
std::vector<Polyline> extract_borders(const BinaryMask& drivable, const GeoReference& ref,
                                      const BorderParams& params = {});

/// Probes outward (away from the drivable side) at evenly spaced stations;
/// curbstone iff at least `walkway_fraction` of valid probes reach a walkway
/// pixel within `probe_dist`. Stations and normals are symmetric under
/// reversal of `line`.
BorderKind classify_border(const Polyline& line, const SemanticMask& mask, const GeoReference& ref,
                           double probe_dist, double walkway_fraction, double probe_step = 0.25);

std::vector<RoadBorder> extract_road_borders(const SemanticMask& mask, const GeoReference& ref,
                                             const BorderParams& params = {});

}  // namespace border
}  // namespace hdmap
