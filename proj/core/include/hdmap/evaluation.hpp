#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hdmap/geometry.hpp"
#include "hdmap/lanelet2_io.hpp"

namespace hdmap {

struct MatchPair {
  std::size_t generated = 0;
  std::size_t reference = 0;
  double distance = 0.0;
  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

/// One-to-one, sorted by generated index.
struct Assignment {
  std::vector<MatchPair> pairs;
  /// Summed in generated-index order.
  double total_distance() const;
};

struct MatchReport {
  double precision = 1.0;
  double recall = 1.0;
  std::size_t matched = 0;
  std::size_t generated_points = 0;
  std::size_t reference_points = 0;
  double mean_match_distance = 0.0;
  double rmse = 0.0;  // supplementary
};

namespace evaluation {

/// Union of uniform resamples, class-agnostic.
std::vector<Point2> prepare_points(std::span<const Polyline> polylines, double step = 0.10);

/// Maximum-cardinality matching among pairs within `gate`, and of those the
/// one with least total distance. Independent components of the gate graph
/// are solved separately by successive shortest augmenting paths.
Assignment optimal_assignment(std::span<const Point2> gen, std::span<const Point2> ref,
                              double gate = 0.20);

/// An empty side counts as fully precise (or fully recalled) when nothing
/// matched.
MatchReport precision_recall(const Assignment& a, std::size_t n_gen, std::size_t n_ref);

/// Way polylines of a map grouped by category; arrows are excluded.
/// Categories: road_border, curbstone, solid, dashed, or the raw type tag.
std::map<std::string, std::vector<Polyline>> evaluation_polylines(const HdMap& map);

struct ClassCounts {
  std::size_t generated_points = 0;
  std::size_t reference_points = 0;
  std::size_t matched = 0;
};

struct EvaluationResult {
  MatchReport report;
  std::map<std::string, ClassCounts> per_class;  // class-aware supplementary matching
};

EvaluationResult evaluate_maps(const HdMap& generated, const HdMap& reference, double step = 0.10,
                               double gate = 0.20);

/// JSON report: headline MatchReport fields plus `per_class`.
std::string to_json(const EvaluationResult& result);

}  // namespace evaluation
}  // namespace hdmap
