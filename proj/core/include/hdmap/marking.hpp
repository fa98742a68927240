#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hdmap/georef.hpp"
#include "hdmap/raster.hpp"

namespace hdmap {

enum class MarkingKind { kSolid, kDashed };

std::string_view to_string(MarkingKind kind);

struct LaneMarking {
  Polyline line;  // UTM metres
  MarkingKind kind = MarkingKind::kSolid;
  std::vector<int> member_dashes;  // component labels; empty for solid markings
};

struct DashComponent {
  int component = 0;  // label in the marking ComponentSet
  Point2 centroid;    // UTM metres
  double length = 0.0;
  double width = 0.0;
  double orientation = 0.0;  // axial, [0, pi), UTM frame
  std::size_t pixel_count = 0;
};

/// A centreline piece and the marking component it was traced from.
struct MarkingPath {
  Polyline line;
  int component = 0;
};

namespace marking {

struct DashParams {
  double min_len = 0.5;
  double max_len = 6.0;
  double max_width = 0.5;

  friend bool operator==(const DashParams&, const DashParams&) = default;
};

struct GroupParams {
  double gap_max = 6.0;      // free gap between consecutive dashes, metres
  double len_tol = 0.5;      // relative to the group's mean length
  double angle_tol = 15.0;   // degrees
  double lateral_tol = 0.75; // offset from a member's axis, metres

  friend bool operator==(const GroupParams&, const GroupParams&) = default;
};

struct MarkingParams {
  double simplify_tolerance = 0.05;
  double corner_turn = 60.0;  // degrees
  double spur_length = 0.3;   // metres
  double min_length = 0.5;    // metres
  DashParams dash;
  GroupParams group;

  friend bool operator==(const MarkingParams&, const MarkingParams&) = default;
};

/// Decomposes a thin skeleton into paths between endpoints and junctions.
/// Adjacent junction pixels form one junction represented by a single pixel,
/// which every incident path shares. Isolated pixels yield no path; pure
/// cycles yield closed polylines. Throws InvalidArgument when not thin.
std::vector<Polyline> split_at_branches(const BinaryMask& skeleton);

/// Cuts where the turn measured over a three-segment window reaches
/// `corner_turn` degrees; only the strongest vertex of a run of candidates is
/// cut. Pieces share the cut vertex.
std::vector<Polyline> split_right_angles(const Polyline& pl, double corner_turn);

std::vector<DashComponent> detect_dashes(const ComponentSet& cs, const GeoReference& ref,
                                         const DashParams& params = {});

/// Greedy growth from seeds in descending length order. Returns a partition
/// of dash indices; each group is in absorption order.
std::vector<std::vector<std::size_t>> group_dashes(std::span<const DashComponent> dashes,
                                                   const GroupParams& params = {});

/// Skeleton paths of the lane_marking class, in metres, split at branches
/// and right angles.
std::vector<MarkingPath> marking_paths(const SemanticMask& mask, const GeoReference& ref,
                                       const MarkingParams& params = {});
std::vector<Polyline> marking_centerlines(const SemanticMask& mask, const GeoReference& ref,
                                          const MarkingParams& params = {});

/// Groups of two or more dashes become dashed markings through their
/// centroids; paths of all other components become solid markings.
std::vector<LaneMarking> classify_markings(std::span<const MarkingPath> paths,
                                           std::span<const DashComponent> dashes,
                                           std::span<const std::vector<std::size_t>> groups);

struct MarkingResult {
  std::vector<LaneMarking> markings;
  std::vector<DashComponent> dashes;
  std::vector<std::vector<std::size_t>> groups;
};
MarkingResult extract_markings(const SemanticMask& mask, const GeoReference& ref,
                               const MarkingParams& params = {});

}  // namespace marking
}  // namespace hdmap
