#pragma once

#include <cstddef>
#include <string_view>

#include "hdmap/georef.hpp"
#include "hdmap/image_io.hpp"
#include "hdmap/lanelet2_io.hpp"

namespace hdmap::overlay {

Rgb class_colour(ClassId id);

/// Colour of a map way by its evaluation category (road_border, curbstone,
/// solid, dashed, arrow); anything else is drawn white.
Rgb element_colour(std::string_view category);

struct OverlayResult {
  RgbImage image;
  std::size_t clipped_vertices = 0;  // way vertices outside the tile
};

/// Class-coloured mask with every way drawn on top (3 px brush) and a legend
/// of swatches in the top-left corner. Geometry outside the tile is clipped.
OverlayResult render(const SemanticMask& mask, const HdMap& map, const GeoReference& ref);

}  // namespace hdmap::overlay
