#include "hdmap/pipeline.hpp"

#include <chrono>

#include <nlohmann/json.hpp>

namespace hdmap::pipeline {
namespace {

class StageClock {
 public:
  explicit StageClock(std::map<std::string, double>& sink) : sink_(sink) {}
  void lap(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_[stage] = std::chrono::duration<double, std::milli>(now - last_).count();
    last_ = now;
  }

 private:
  std::map<std::string, double>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

ElementId add_polyline(HdMap& map, const Polyline& line, const GeoReference& ref, Tags tags) {
  std::vector<ElementId> ids;
  for (const Point2& p : line.points()) ids.push_back(map.add_utm_point({p.x, p.y}, ref));
  if (line.closed()) ids.push_back(ids.front());
  return map.add_linestring(std::move(ids), std::move(tags));
}

Tags border_tags(BorderKind kind) {
  if (kind == BorderKind::kCurbstone) return {{"type", "curbstone"}, {"subtype", "high"}};
  return {{"type", "road_border"}};
}

}  // namespace

PipelineResult run(const SemanticMask& mask, const GeoReference& ref, const PipelineConfig& cfg,
                   const SymbolClassifier& classifier) {
  cfg.validate();
  ref.validate();
  PipelineResult r;
  StageClock clock(r.timings_ms);

  const SemanticMask fixed = symbols::reassign_mixed_components(mask);
  clock.lap("reassign");

  r.borders = border::extract_road_borders(fixed, ref, cfg.border);
  clock.lap("borders");

  r.markings = marking::extract_markings(fixed, ref, cfg.marking);
  clock.lap("markings");

  r.symbols = symbols::extract_symbols(fixed, ref, classifier,
                                       static_cast<std::size_t>(cfg.symbol_min_pixels));
  clock.lap("symbols");

  for (const RoadBorder& b : r.borders) {
    r.boundaries.push_back({b.line, b.kind == BorderKind::kCurbstone ? BoundaryKind::kCurbstone
                                                                     : BoundaryKind::kRoadBorder});
  }
  for (const LaneMarking& m : r.markings.markings) {
    r.boundaries.push_back({m.line, m.kind == MarkingKind::kDashed ? BoundaryKind::kDashed
                                                                   : BoundaryKind::kSolid});
  }
  std::vector<CandidatePair> passing;
  for (CandidatePair& p : lanes::candidate_pairs(r.boundaries, cfg.lanes)) {
    if (lanes::continuity_check(fixed, ref, p, cfg.lanes.end_margin)) passing.push_back(std::move(p));
  }
  r.lanelets = lanes::build_lanelets(passing, r.boundaries, r.symbols);
  clock.lap("lanes");

  r.map = build_map(r, ref);
  clock.lap("export");
  return r;
}

HdMap build_map(const PipelineResult& result, const GeoReference& ref) {
  HdMap map;
  std::vector<ElementId> boundary_ids;
  for (const RoadBorder& b : result.borders) {
    boundary_ids.push_back(add_polyline(map, b.line, ref, border_tags(b.kind)));
  }
  for (const LaneMarking& m : result.markings.markings) {
    boundary_ids.push_back(add_polyline(map, m.line, ref,
                                        {{"type", "line_thin"}, {"subtype", std::string(to_string(m.kind))}}));
  }
  std::vector<ElementId> symbol_ids;
  for (const Symbol& s : result.symbols) {
    const ElementId a = map.add_utm_point({s.axis[0].x, s.axis[0].y}, ref);
    const ElementId b = map.add_utm_point({s.axis[1].x, s.axis[1].y}, ref);
    symbol_ids.push_back(map.add_symbol(a, b, {{"type", "arrow"}, {"subtype", std::string(to_string(s.cls))}}));
  }
  for (const Lanelet& l : result.lanelets) {
    std::vector<ElementId> syms;
    for (std::size_t s : l.symbols) syms.push_back(symbol_ids.at(s));
    map.add_lanelet(boundary_ids.at(l.left), boundary_ids.at(l.right), std::move(syms),
                    {{"type", "lanelet"}, {"subtype", "road"}, {"needs_review_direction", "yes"}});
  }
  map.validate();
  return map;
}

std::string summary_json(const PipelineResult& r) {
  nlohmann::ordered_json j;
  std::size_t curbstones = 0, dashed = 0;
  for (const RoadBorder& b : r.borders) curbstones += b.kind == BorderKind::kCurbstone ? 1 : 0;
  for (const LaneMarking& m : r.markings.markings) dashed += m.kind == MarkingKind::kDashed ? 1 : 0;
  j["borders"] = r.borders.size();
  j["curbstones"] = curbstones;
  j["markings"] = r.markings.markings.size();
  j["dashed_markings"] = dashed;
  j["dash_components"] = r.markings.dashes.size();
  j["symbols"] = r.symbols.size();
  j["lanelets"] = r.lanelets.size();
  j["points"] = r.map.points.size();
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [stage, ms] : r.timings_ms) t[stage] = ms;
  j["timings_ms"] = t;
  return j.dump(2) + "\n";
}

}  // namespace hdmap::pipeline
