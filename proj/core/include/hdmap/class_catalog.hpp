#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace hdmap {

/// Semantic class ids stored in mask rasters. Dense and stable.
enum class ClassId : std::uint8_t {
  kIrrelevant = 0,
  kRoad = 1,
  kWalkway = 2,
  kVegetation = 3,
  kParking = 4,
  kTrafficIsland = 5,
  kSymbol = 6,
  kLaneMarking = 7,
  kVehicle = 8,  // annotation only; the pipeline never emits it
};

struct ClassCatalog {
  static constexpr std::size_t kSize = 9;
  static constexpr std::array<std::string_view, kSize> kNames = {
      "irrelevant", "road",   "walkway",      "vegetation", "parking",
      "traffic_island", "symbol", "lane_marking", "vehicle"};

  static constexpr bool is_valid(std::uint8_t raw) { return raw < kSize; }
  static constexpr std::string_view name(ClassId id) {
    return kNames[static_cast<std::size_t>(id)];
  }
  static std::optional<ClassId> from_name(std::string_view name);
  static std::optional<ClassId> from_raw(std::uint8_t raw) {
    if (!is_valid(raw)) return std::nullopt;
    return static_cast<ClassId>(raw);
  }
};

constexpr std::uint8_t raw(ClassId id) { return static_cast<std::uint8_t>(id); }

}  // namespace hdmap
