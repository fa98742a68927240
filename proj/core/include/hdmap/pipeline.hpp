#pragma once

#include <map>
#include <string>
#include <vector>

#include "hdmap/border.hpp"
#include "hdmap/config.hpp"
#include "hdmap/lanelet2_io.hpp"
#include "hdmap/lanes.hpp"
#include "hdmap/marking.hpp"
#include "hdmap/symbols.hpp"

namespace hdmap {

struct PipelineResult {
  std::vector<RoadBorder> borders;
  marking::MarkingResult markings;
  std::vector<Symbol> symbols;
  std::vector<Boundary> boundaries;  // borders first, then markings
  std::vector<Lanelet> lanelets;
  HdMap map;
  std::map<std::string, double> timings_ms;
};

namespace pipeline {

/// reassign -> borders -> markings -> symbols -> lanes -> map.
PipelineResult run(const SemanticMask& mask, const GeoReference& ref, const PipelineConfig& cfg,
                   const SymbolClassifier& classifier);

/// Lanelet2 map of the extracted elements; ids follow border, marking,
/// symbol, lanelet order.
HdMap build_map(const PipelineResult& result, const GeoReference& ref);

/// Element counts and stage timings.
std::string summary_json(const PipelineResult& result);

}  // namespace pipeline
}  // namespace hdmap
