#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hdmap/georef.hpp"
#include "hdmap/raster.hpp"
#include "hdmap/symbols.hpp"

namespace hdmap {

enum class BoundaryKind { kRoadBorder, kCurbstone, kSolid, kDashed };

std::string_view to_string(BoundaryKind kind);

/// A classified border or marking line, metres.
struct Boundary {
  Polyline line;
  BoundaryKind kind = BoundaryKind::kRoadBorder;
};

/// Sample on one boundary and its perpendicular foot on the other.
struct CrossSection {
  Point2 from;
  Point2 to;
};

struct CandidatePair {
  std::size_t a = 0;  // boundary the sections start on
  std::size_t b = 0;
  double score = 0.0;
  double mean_width = 0.0;
  std::vector<CrossSection> sections;  // matching samples only
};

struct Lanelet {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<std::size_t> symbols;
  double score = 0.0;
  double mean_width = 0.0;
};

namespace lanes {

struct LaneParams {
  double width_min = 2.0;
  double width_max = 6.0;
  double angle_tol = 15.0;  // degrees
  double sample_step = 1.0;
  double match_fraction = 0.5;
  double end_margin = 0.1;  // metres of each cross-section ignored by the pixel walk

  friend bool operator==(const LaneParams&, const LaneParams&) = default;
};

/// Scores each unordered pair by the better of its two sampling directions.
/// A sample matches when its perpendicular foot falls inside the other line,
/// at a distance in [width_min, width_max], with axial orientation difference
/// at most angle_tol. Pairs below match_fraction are dropped.
std::vector<CandidatePair> candidate_pairs(std::span<const Boundary> boundaries,
                                           const LaneParams& params = {});

/// True iff every pixel along every cross-section (less `end_margin` at both
/// ends, which straddle the boundary pixels themselves) is drivable.
bool continuity_check(const SemanticMask& mask, const GeoReference& ref, const CandidatePair& pair,
                      double end_margin = 0.1);

/// Greedy by descending score. Drops pairs whose lines cross and pairs for
/// which another boundary cuts at least half of the cross-sections. Each
/// symbol joins at most one lanelet, the one whose corridor holds its axis
/// midpoint. Where only one boundary reaches the midpoint, the other's open
/// end is extended straight by up to three corridor widths, since a dashed
/// line stops at its last dash centroid.
std::vector<Lanelet> build_lanelets(std::span<const CandidatePair> pairs,
                                    std::span<const Boundary> boundaries,
                                    std::span<const Symbol> symbols);

/// True when any segment of `a` meets any segment of `b`.
bool polylines_cross(const Polyline& a, const Polyline& b);

}  // namespace lanes
}  // namespace hdmap
