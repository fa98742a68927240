#include "hdmap/config.hpp"

#include <map>

#include "hdmap/keyvalue.hpp"

namespace hdmap {
namespace {

std::map<std::string, double*> fields(PipelineConfig& c) {
  return {
      {"border.max_turn", &c.border.max_turn_deg},
      {"border.simplify_tolerance", &c.border.simplify_tolerance},
      {"border.min_length", &c.border.min_length},
      {"border.probe_dist", &c.border.probe_dist},
      {"border.probe_step", &c.border.probe_step},
      {"border.walkway_fraction", &c.border.walkway_fraction},
      {"marking.simplify_tolerance", &c.marking.simplify_tolerance},
      {"marking.corner_turn", &c.marking.corner_turn},
      {"marking.spur_length", &c.marking.spur_length},
      {"marking.min_length", &c.marking.min_length},
      {"dash.min_len", &c.marking.dash.min_len},
      {"dash.max_len", &c.marking.dash.max_len},
      {"dash.max_width", &c.marking.dash.max_width},
      {"group.gap_max", &c.marking.group.gap_max},
      {"group.len_tol", &c.marking.group.len_tol},
      {"group.angle_tol", &c.marking.group.angle_tol},
      {"group.lateral_tol", &c.marking.group.lateral_tol},
      {"lane.width_min", &c.lanes.width_min},
      {"lane.width_max", &c.lanes.width_max},
      {"lane.angle_tol", &c.lanes.angle_tol},
      {"lane.sample_step", &c.lanes.sample_step},
      {"lane.match_fraction", &c.lanes.match_fraction},
      {"lane.end_margin", &c.lanes.end_margin},
      {"symbol.score_floor", &c.symbol_score_floor},
      {"symbol.min_pixels", &c.symbol_min_pixels},
      {"eval.resample_step", &c.resample_step},
      {"eval.match_gate", &c.match_gate},
  };
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("config: " + what);
}

}  // namespace

void PipelineConfig::validate() const {
  PipelineConfig copy = *this;
  for (const auto& [key, ptr] : fields(copy)) require(*ptr > 0.0, key + " must be positive");
  for (double angle : {border.max_turn_deg, marking.corner_turn, marking.group.angle_tol, lanes.angle_tol}) {
    require(angle < 180.0, "angles must be below 180 degrees");
  }
  require(border.walkway_fraction <= 1.0, "border.walkway_fraction must not exceed 1");
  require(lanes.match_fraction <= 1.0, "lane.match_fraction must not exceed 1");
  require(symbol_score_floor <= 1.0, "symbol.score_floor must not exceed 1");
  require(marking.dash.min_len < marking.dash.max_len, "dash.min_len must be below dash.max_len");
  require(lanes.width_min < lanes.width_max, "lane.width_min must be below lane.width_max");
  require(resample_step < match_gate, "eval.resample_step must be below eval.match_gate");
}

namespace config {

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  auto table = fields(cfg);
  for (const auto& [key, value] : parse_key_values(text)) {
    const auto it = table.find(key);
    if (it == table.end()) throw InputError("unknown config key '" + key + "'");
    *it->second = parse_double(key, value);
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw InputError(e.what());
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  try {
    return parse_config(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_config(const PipelineConfig& cfg) {
  PipelineConfig copy = cfg;
  std::string out;
  for (const auto& [key, ptr] : fields(copy)) out += key + "=" + format_double(*ptr) + "\n";
  return out;
}

}  // namespace config
}  // namespace hdmap
