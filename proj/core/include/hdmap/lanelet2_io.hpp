#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hdmap/georef.hpp"

namespace hdmap {

using ElementId = std::int64_t;
using Tags = std::map<std::string, std::string>;

/// OSM node. `x`/`y` are the UTM easting/northing written as the
/// `local_x`/`local_y` tags; `tags` holds every other node tag.
struct MapPoint {
  double lat = 0.0;
  double lon = 0.0;
  double x = 0.0;
  double y = 0.0;
  Tags tags;
  friend bool operator==(const MapPoint&, const MapPoint&) = default;
};

struct LineString {
  std::vector<ElementId> points;
  Tags tags;
  friend bool operator==(const LineString&, const LineString&) = default;
};

struct LaneletRelation {
  ElementId left = 0;
  ElementId right = 0;
  std::vector<ElementId> symbols;  // ids of arrow ways
  Tags tags;
  friend bool operator==(const LaneletRelation&, const LaneletRelation&) = default;
};

/// Lanelet2-flavoured OSM map. Ids are positive and unique across all
/// element kinds. Arrow ways (type=arrow) live in `symbols`, every other way
/// in `linestrings`.
struct HdMap {
  std::map<ElementId, MapPoint> points;
  std::map<ElementId, LineString> linestrings;
  std::map<ElementId, LineString> symbols;
  std::map<ElementId, LaneletRelation> lanelets;

  /// Coordinates are rounded to the 9 decimals the writer emits, so a parsed
  /// copy compares equal.
  ElementId add_point(double lat, double lon, double x, double y, Tags tags = {});
  ElementId add_linestring(std::vector<ElementId> point_ids, Tags tags);
  ElementId add_symbol(ElementId first, ElementId second, Tags tags);
  ElementId add_lanelet(ElementId left, ElementId right, std::vector<ElementId> symbol_ids,
                        Tags tags);

  /// Node from UTM coordinates; lat/lon derived through the georeference's zone.
  ElementId add_utm_point(UtmCoordinate utm, const GeoReference& ref);

  ElementId next_id() const noexcept { return next_id_; }
  /// Ensures later add_* calls allocate ids above `id`.
  void reserve_id(ElementId id) { next_id_ = std::max(next_id_, id + 1); }
  bool empty() const noexcept {
    return points.empty() && linestrings.empty() && symbols.empty() && lanelets.empty();
  }

  /// Throws IntegrityError for dangling references, non-positive or
  /// duplicate ids, or linestrings with fewer than two points.
  void validate() const;

  /// Way geometry as (x, y) metre polyline.
  std::vector<Point2> geometry(const LineString& ls) const;

  friend bool operator==(const HdMap& a, const HdMap& b) {
    return a.points == b.points && a.linestrings == b.linestrings && a.symbols == b.symbols &&
           a.lanelets == b.lanelets;
  }

 private:
  ElementId next_id_ = 1;
};

/// Rounds to the fixed 9-decimal text representation used on export.
double quantize_coordinate(double v);

/// Deterministic UTF-8 OSM 0.6 document (LF line endings). Validates first;
/// throws IntegrityError before producing any output.
std::string export_osm(const HdMap& map);

/// Inverse of export_osm. Unknown tags are kept verbatim. Throws ParseError
/// (with line number) on malformed XML, duplicate ids, or unresolved
/// references.
HdMap parse_osm(std::string_view xml);

HdMap load_osm(const std::string& path);

}  // namespace hdmap
