#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hdmap/georef.hpp"
#include "hdmap/raster.hpp"

namespace hdmap {

enum class SymbolClass {
  kLeft,
  kRight,
  kStraight,
  kStraightOrLeft,
  kStraightOrRight,
  kLeftOrRight,
  kOther,
};

inline constexpr std::array<SymbolClass, 7> kAllSymbolClasses = {
    SymbolClass::kLeft,           SymbolClass::kRight,           SymbolClass::kStraight,
    SymbolClass::kStraightOrLeft, SymbolClass::kStraightOrRight, SymbolClass::kLeftOrRight,
    SymbolClass::kOther};

std::string_view to_string(SymbolClass c);
std::optional<SymbolClass> symbol_class_from_string(std::string_view s);

struct SymbolCrop {
  BinaryMask crop;  // tight bounding box
  Pixel offset;     // tile position of crop pixel (0, 0)
};

struct Classification {
  SymbolClass cls = SymbolClass::kOther;
  double confidence = 0.0;  // [0, 1]
};

struct Symbol {
  SymbolClass cls = SymbolClass::kOther;
  std::array<Point2, 2> axis;  // UTM metres, unordered
  BinaryMask crop;
  Pixel offset;
  double confidence = 0.0;
};

class SymbolClassifier {
 public:
  virtual ~SymbolClassifier() = default;
  virtual Classification classify(const BinaryMask& crop) const = 0;
};

/// Nearest template under normalized cross-correlation after aligning the
/// principal axis vertically and rescaling to a fixed grid. The query is
/// rescored over a small pose grid around that frame (rotation, scale and
/// shift) and in both 180 degree orientations. A match scoring below the floor,
/// or whose coverage falls mostly outside the dilated template, is `other`:
/// paint can be missing from a real symbol but is never added to it.
/// Immutable after construction.
class TemplateClassifier final : public SymbolClassifier {
 public:
  static constexpr int kGrid = 64;

  /// Procedurally drawn arrows, one per directional class.
  static TemplateClassifier builtin(double score_floor = 0.6);
  /// Built-in templates, replaced by `<class>.png` files found in `dir`.
  static TemplateClassifier from_directory(const std::string& dir, double score_floor = 0.6);

  Classification classify(const BinaryMask& crop) const override;

  /// kGrid x kGrid coverage image of the crop, principal axis vertical.
  static std::vector<float> normalize(const BinaryMask& crop);

  double score_floor() const noexcept { return score_floor_; }

 private:
  struct Template {
    SymbolClass cls;
    std::vector<float> image;
  };
  TemplateClassifier(std::vector<Template> templates, double score_floor);

  std::vector<Template> templates_;
  double score_floor_;
};

namespace symbols {

/// Relabels each 8-connected (symbol | lane_marking) component to symbol when
/// at least half of its pixels are symbol. Idempotent.
SemanticMask reassign_mixed_components(const SemanticMask& mask);

/// One crop per 8-connected symbol component, in label order.
std::vector<SymbolCrop> extract_symbol_masks(const SemanticMask& mask);

/// Extreme projections of the crop's pixels onto its first principal axis,
/// in tile pixel coordinates. Throws InvalidArgument for fewer than two pixels.
std::array<Point2, 2> major_axis_endpoints_px(const BinaryMask& crop, Pixel offset);
std::array<Point2, 2> major_axis_endpoints(const BinaryMask& crop, Pixel offset,
                                           const GeoReference& ref);

Classification classify_symbol(const BinaryMask& crop, const SymbolClassifier& classifier);

/// Reassigned mask to classified symbols; components under `min_pixels` are
/// treated as noise.
std::vector<Symbol> extract_symbols(const SemanticMask& reassigned, const GeoReference& ref,
                                    const SymbolClassifier& classifier, std::size_t min_pixels);

/// Arrow outline as convex polygons, mapped from a unit arrow whose tail sits
/// at `tail` and tip direction points at `tip` in a right-handed (y-up)
/// frame. `kOther` has no outline.
std::vector<std::vector<Point2>> arrow_polygons(SymbolClass cls, Point2 tail, Point2 tip);

bool inside_convex(std::span<const Point2> poly, Point2 p);

/// Arrow of `length_px` pointing at `heading` (radians, y-up), rasterized
/// with a margin of two pixels.
BinaryMask render_arrow(SymbolClass cls, double length_px, double heading);

}  // namespace symbols
}  // namespace hdmap
