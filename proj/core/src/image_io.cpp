#include "hdmap/image_io.hpp"

#include <png.h>

#include <cstring>

#include "hdmap/keyvalue.hpp"

namespace hdmap::image_io {
namespace {

Raster<std::uint8_t> read_gray(const std::string& path) {
  const std::string bytes = read_text_file(path);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw InputError(path + ": not a readable PNG (" + image.message + ")");
  }
  // Only genuine 8-bit single-channel files carry class ids verbatim.
  const bool gray8 = (image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA |
                                      PNG_FORMAT_FLAG_COLORMAP | PNG_FORMAT_FLAG_LINEAR)) == 0;
  if (!gray8) {
    png_image_free(&image);
    throw InputError(path + ": expected an 8-bit grayscale PNG");
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw InputError(path + ": empty image");
  }
  image.format = PNG_FORMAT_GRAY;
  Raster<std::uint8_t> out(static_cast<int>(image.width), static_cast<int>(image.height), 0);
  if (!png_image_finish_read(&image, nullptr, out.data().data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw InputError(path + ": " + msg);
  }
  return out;
}

std::string encode(const void* pixels, int width, int height, png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels, 0, nullptr)) {
    throw std::runtime_error(std::string("png encode: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels, 0, nullptr)) {
    throw std::runtime_error(std::string("png encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

SemanticMask load_mask_png(const std::string& path) {
  Raster<std::uint8_t> gray = read_gray(path);
  const auto data = gray.data();
  try {
    return SemanticMask(gray.width(), gray.height(), std::vector<std::uint8_t>(data.begin(), data.end()));
  } catch (const InvalidArgument& e) {
    throw InputError(path + ": " + e.what());
  }
}

BinaryMask load_binary_png(const std::string& path) {
  Raster<std::uint8_t> gray = read_gray(path);
  for (auto& v : gray.data()) v = v ? 1 : 0;
  return gray;
}

std::string encode_gray_png(const Raster<std::uint8_t>& img) {
  return encode(img.data().data(), img.width(), img.height(), PNG_FORMAT_GRAY);
}

std::string encode_rgb_png(const RgbImage& img) {
  static_assert(sizeof(Rgb) == 3);
  return encode(img.data().data(), img.width(), img.height(), PNG_FORMAT_RGB);
}

void save_mask_png(const std::string& path, const SemanticMask& mask) {
  write_file_atomic(path, encode_gray_png(mask.raw_raster()));
}

void save_rgb_png(const std::string& path, const RgbImage& img) {
  write_file_atomic(path, encode_rgb_png(img));
}

}  // namespace hdmap::image_io
