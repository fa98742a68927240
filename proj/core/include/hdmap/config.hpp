#pragma once

#include <string>
#include <string_view>

#include "hdmap/border.hpp"
#include "hdmap/lanes.hpp"
#include "hdmap/marking.hpp"

namespace hdmap {

/// Every pipeline threshold. Serialized as flat `key=value` lines.
struct PipelineConfig {
  border::BorderParams border;
  marking::MarkingParams marking;
  lanes::LaneParams lanes;
  double symbol_score_floor = 0.6;
  double symbol_min_pixels = 50.0;
  double resample_step = 0.10;
  double match_gate = 0.20;

  /// Throws InvalidArgument on non-positive values, fractions above one,
  /// angles outside (0, 180), inverted bounds, or resample_step >= match_gate.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

namespace config {

/// Missing keys keep their defaults; unknown keys and bad values throw
/// InputError. The result is validated.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);
/// All keys, sorted, shortest round-trip number formatting.
std::string format_config(const PipelineConfig& cfg);

}  // namespace config
}  // namespace hdmap
