#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdmap/raster.hpp"

namespace hdmap {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(Rgb, Rgb) = default;
};

using RgbImage = Raster<Rgb>;

namespace image_io {

/// 8-bit single-channel PNG whose values are catalog class ids. Throws
/// InputError when the file is unreadable, not 8-bit grayscale, or holds an
/// unknown id.
SemanticMask load_mask_png(const std::string& path);
/// Any 8-bit grayscale PNG; nonzero pixels are set.
BinaryMask load_binary_png(const std::string& path);

std::string encode_gray_png(const Raster<std::uint8_t>& img);
std::string encode_rgb_png(const RgbImage& img);

/// Written to a temporary file and renamed into place.
void save_mask_png(const std::string& path, const SemanticMask& mask);
void save_rgb_png(const std::string& path, const RgbImage& img);

}  // namespace image_io
}  // namespace hdmap
