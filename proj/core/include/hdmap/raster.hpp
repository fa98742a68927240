#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "hdmap/class_catalog.hpp"
#include "hdmap/error.hpp"
#include "hdmap/geometry.hpp"

namespace hdmap {

struct Pixel {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(Pixel, Pixel) = default;
  friend constexpr auto operator<=>(const Pixel& a, const Pixel& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Row-major dense raster. Pixels outside the raster are treated as
/// background by every operation in this module.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw InvalidArgument("raster dimensions must be positive");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  bool contains(Pixel p) const noexcept { return contains(p.x, p.y); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](Pixel p) { return (*this)(p.x, p.y); }
  const T& operator[](Pixel p) const { return (*this)(p.x, p.y); }

  /// Value at (x, y), or `outside` when off-raster.
  T get_or(int x, int y, T outside) const {
    return contains(x, y) ? (*this)(x, y) : outside;
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// 0/1 per pixel.
using BinaryMask = Raster<std::uint8_t>;

/// Class-indexed raster; every stored value is a valid ClassCatalog id.
class SemanticMask {
 public:
  SemanticMask(int width, int height, ClassId fill = ClassId::kIrrelevant);
  /// Throws InvalidArgument if any value is not a catalog id.
  SemanticMask(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return raster_.width(); }
  int height() const noexcept { return raster_.height(); }
  bool contains(int x, int y) const noexcept { return raster_.contains(x, y); }

  ClassId at(int x, int y) const { return static_cast<ClassId>(raster_(x, y)); }
  ClassId at(Pixel p) const { return at(p.x, p.y); }
  void set(int x, int y, ClassId id) { raster_(x, y) = raw(id); }
  void set(Pixel p, ClassId id) { set(p.x, p.y, id); }

  const Raster<std::uint8_t>& raw_raster() const noexcept { return raster_; }

  friend bool operator==(const SemanticMask&, const SemanticMask&) = default;

 private:
  Raster<std::uint8_t> raster_;
};

struct BoundingBox {
  int min_x = 0;
  int min_y = 0;
  int max_x = -1;
  int max_y = -1;
  int width() const noexcept { return max_x - min_x + 1; }
  int height() const noexcept { return max_y - min_y + 1; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Component {
  int label = 0;
  BoundingBox bbox;
  std::vector<Pixel> pixels;  // raster order
  std::size_t size() const noexcept { return pixels.size(); }
};

/// Label raster (0 = background, k = component k) plus per-component data.
/// components[k - 1].label == k.
struct ComponentSet {
  Raster<int> labels;
  std::vector<Component> components;
};

enum class Connectivity { kFour = 4, kEight = 8 };

namespace raster {

/// True where the mask class is in `classes`.
BinaryMask class_mask(const SemanticMask& mask, std::initializer_list<ClassId> classes);
BinaryMask class_mask(const SemanticMask& mask, std::span<const ClassId> classes);
/// Raw-id variant; throws InvalidArgument on ids outside the catalog.
BinaryMask class_mask(const SemanticMask& mask, std::span<const std::uint8_t> raw_classes);

ComponentSet connected_components(const BinaryMask& mask, Connectivity connectivity);

/// Keeps components with min_px <= size <= max_px, relabelled densely in
/// their original order.
ComponentSet filter_components(const ComponentSet& cs, std::size_t min_px, std::size_t max_px);

/// Two-subcycle thinning followed by staircase removal. Result is a subset of
/// the input, preserves 8-connected topology, and contains no 2x2 block.
BinaryMask skeletonize(const BinaryMask& mask);

/// True when no fully-set 2x2 block exists.
bool is_thin(const BinaryMask& mask);

/// Closed pixel contours: one outer contour per 8-connected component and one
/// per hole (4-connected background region not touching the raster edge).
/// Coordinates are pixel indices. Outer contours are counter-clockwise and
/// holes clockwise in the north-up (y flipped) frame, i.e. the opposite sense
/// when viewed in raw image coordinates.
/// A single-pixel component yields a one-pixel contour, which has no
/// Polyline form.
struct Contour {
  std::vector<Pixel> pixels;
  bool is_hole = false;
  int component = 0;  // 8-connected label of the traced foreground component

  /// Closed pixel-unit polyline. Throws InvalidArgument for one-pixel contours.
  Polyline to_polyline() const;
};
std::vector<Contour> trace_contours(const BinaryMask& mask);

/// Number of set 8-neighbours of p. Throws InvalidArgument when p is off-raster.
int neighbor_count(const BinaryMask& skeleton, Pixel p);

std::size_t count_set(const BinaryMask& mask);

/// Each pixel takes the majority value of its 3x3 neighbourhood (off-raster
/// neighbours count as background). Removes one-pixel bumps and dents while
/// leaving straight and diagonal edges in place.
BinaryMask majority_filter(const BinaryMask& mask);

}  // namespace raster
}  // namespace hdmap
