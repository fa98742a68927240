#include "hdmap/class_catalog.hpp"

namespace hdmap {

std::optional<ClassId> ClassCatalog::from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSize; ++i) {
    if (kNames[i] == name) return static_cast<ClassId>(i);
  }
  return std::nullopt;
}

}  // namespace hdmap
