#include "hdmap/lanes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace hdmap {

std::string_view to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::kRoadBorder: return "road_border";
    case BoundaryKind::kCurbstone: return "curbstone";
    case BoundaryKind::kSolid: return "solid";
    case BoundaryKind::kDashed: return "dashed";
  }
  return "road_border";
}

namespace lanes {
namespace {

Point2 segment_direction(const Polyline& pl, std::size_t seg) {
  const Point2 d = pl.segment_end(seg) - pl.segment_start(seg);
  return (1.0 / norm(d)) * d;
}

double axial(Point2 d) { return std::atan2(d.y, d.x); }

bool foot_inside(const Polyline& pl, const geometry::Projection& pr) {
  if (pl.closed()) return true;
  if (pr.segment == 0 && pr.t <= 0.0) return false;
  if (pr.segment + 1 == pl.segment_count() && pr.t >= 1.0) return false;
  return true;
}

// Foot of p on a boundary whose open ends continue straight on. Dashed lines
// end at a dash centroid, so the painted lane reaches past their last vertex.
struct CorridorFoot {
  Point2 point;
  double distance = 0.0;
  double overhang = 0.0;  // how far beyond the open end the foot lies
};

CorridorFoot corridor_foot(const Polyline& pl, Point2 p) {
  const geometry::Projection pr = geometry::project(pl, p);
  if (foot_inside(pl, pr)) return {pr.point, pr.distance, 0.0};
  const bool at_start = pr.segment == 0 && pr.t <= 0.0;
  const Point2 a = at_start ? pl[0] : pl[pl.size() - 1];
  const Point2 b = at_start ? pl[1] : pl[pl.size() - 2];
  const Point2 out_dir = (1.0 / distance(a, b)) * (a - b);
  const double along = dot(p - a, out_dir);
  const Point2 foot = a + std::max(along, 0.0) * out_dir;
  return {foot, distance(foot, p), std::max(along, 0.0)};
}

struct Directed {
  double score = 0.0;
  std::vector<CrossSection> sections;
  double width_sum = 0.0;
};

Directed sample(const Polyline& a, const Polyline& b, const LaneParams& p) {
  const Polyline open = a.opened();
  const double len = open.length();
  const auto n = static_cast<std::size_t>(std::max(1.0, std::floor(len / p.sample_step)));
  const double tol = p.angle_tol * kDegree;
  Directed out;
  std::size_t matches = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = (static_cast<double>(k) + 0.5) * len / static_cast<double>(n);
    const Point2 pt = geometry::point_at(open, s);
    const geometry::Projection self = geometry::project(open, pt);
    const geometry::Projection other = geometry::project(b, pt);
    if (!foot_inside(b, other)) continue;
    if (other.distance < p.width_min || other.distance > p.width_max) continue;
    const double da = axial(segment_direction(open, self.segment));
    const double db = axial(segment_direction(b, other.segment));
    if (geometry::axial_difference(da, db) > tol) continue;
    ++matches;
    out.sections.push_back({pt, other.point});
    out.width_sum += other.distance;
  }
  out.score = static_cast<double>(matches) / static_cast<double>(n);
  return out;
}

bool is_drivable(ClassId c) {
  return c == ClassId::kRoad || c == ClassId::kLaneMarking || c == ClassId::kSymbol;
}

bool section_cut_by(const CrossSection& cs, const Polyline& line) {
  for (std::size_t i = 0; i < line.segment_count(); ++i) {
    if (geometry::segments_intersect(cs.from, cs.to, line.segment_start(i), line.segment_end(i))) {
      return true;
    }
  }
  return false;
}

// +1 when `p` lies left of `line` walked in its stored direction.
int side_of(const Polyline& line, Point2 p) {
  const geometry::Projection pr = geometry::project(line, p);
  const double c = cross(segment_direction(line, pr.segment), p - pr.point);
  return c > 0.0 ? 1 : (c < 0.0 ? -1 : 0);
}

}  // namespace

std::vector<CandidatePair> candidate_pairs(std::span<const Boundary> boundaries,
                                           const LaneParams& params) {
  if (!(params.width_min < params.width_max)) throw InvalidArgument("candidate_pairs: width_min >= width_max");
  if (!(params.sample_step > 0.0)) throw InvalidArgument("candidate_pairs: sample_step must be positive");
  std::vector<CandidatePair> out;
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    for (std::size_t j = i + 1; j < boundaries.size(); ++j) {
      Directed ij = sample(boundaries[i].line, boundaries[j].line, params);
      Directed ji = sample(boundaries[j].line, boundaries[i].line, params);
      const bool forward = ij.score >= ji.score;
      Directed& best = forward ? ij : ji;
      if (best.score < params.match_fraction || best.sections.empty()) continue;
      CandidatePair pair;
      pair.a = forward ? i : j;
      pair.b = forward ? j : i;
      pair.score = best.score;
      pair.mean_width = best.width_sum / static_cast<double>(best.sections.size());
      pair.sections = std::move(best.sections);
      out.push_back(std::move(pair));
    }
  }
  return out;
}

bool continuity_check(const SemanticMask& mask, const GeoReference& ref, const CandidatePair& pair,
                      double end_margin) {
  const double margin_px = end_margin / ref.gsd;
  for (const CrossSection& cs : pair.sections) {
    const Point2 a = geo::utm_to_pixel({cs.from.x, cs.from.y}, ref);
    const Point2 b = geo::utm_to_pixel({cs.to.x, cs.to.y}, ref);
    const double len = distance(a, b);
    const auto steps = static_cast<int>(std::ceil(2.0 * len));
    for (int k = 0; k <= steps; ++k) {
      const double s = steps == 0 ? 0.0 : len * k / steps;
      if (s < margin_px || s > len - margin_px) continue;
      const Point2 p = a + (s / len) * (b - a);
      const int x = static_cast<int>(std::lround(p.x));
      const int y = static_cast<int>(std::lround(p.y));
      if (!mask.contains(x, y) || !is_drivable(mask.at(x, y))) return false;
    }
  }
  return true;
}

bool polylines_cross(const Polyline& a, const Polyline& b) {
  for (std::size_t i = 0; i < a.segment_count(); ++i) {
    for (std::size_t j = 0; j < b.segment_count(); ++j) {
      if (geometry::segments_intersect(a.segment_start(i), a.segment_end(i), b.segment_start(j),
                                       b.segment_end(j))) {
        return true;
      }
    }
  }
  return false;
}

std::vector<Lanelet> build_lanelets(std::span<const CandidatePair> pairs,
                                    std::span<const Boundary> boundaries,
                                    std::span<const Symbol> symbols) {
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const CandidatePair& p = pairs[x];
    const CandidatePair& q = pairs[y];
    if (p.score != q.score) return p.score > q.score;
    return std::minmax(p.a, p.b) < std::minmax(q.a, q.b);
  });

  std::set<std::pair<std::size_t, std::size_t>> emitted;
  std::vector<Lanelet> out;
  for (std::size_t idx : order) {
    const CandidatePair& pair = pairs[idx];
    if (pair.a == pair.b || pair.a >= boundaries.size() || pair.b >= boundaries.size()) {
      throw InvalidArgument("build_lanelets: pair references an unknown boundary");
    }
    const auto key = std::minmax(pair.a, pair.b);
    if (emitted.count(key)) continue;
    const Polyline& la = boundaries[pair.a].line;
    const Polyline& lb = boundaries[pair.b].line;
    if (polylines_cross(la, lb)) continue;

    bool between = false;
    for (std::size_t c = 0; c < boundaries.size() && !between; ++c) {
      if (c == pair.a || c == pair.b) continue;
      std::size_t cut = 0;
      for (const CrossSection& cs : pair.sections) cut += section_cut_by(cs, boundaries[c].line) ? 1 : 0;
      between = 2 * cut >= pair.sections.size();
    }
    if (between) continue;

    int a_left_of_b = 0;
    int b_left_of_a = 0;
    for (const CrossSection& cs : pair.sections) {
      a_left_of_b += side_of(lb, cs.from);
      b_left_of_a += side_of(la, cs.to);
    }
    Lanelet l;
    if (a_left_of_b > 0 || b_left_of_a <= 0) {
      l.left = pair.a;
      l.right = pair.b;
    } else {
      l.left = pair.b;
      l.right = pair.a;
    }
    l.score = pair.score;
    l.mean_width = pair.mean_width;
    emitted.insert(key);
    out.push_back(std::move(l));
  }

  // Corridor test: the symbol midpoint sits between the two feet.
  for (std::size_t s = 0; s < symbols.size(); ++s) {
    const Point2 mid = 0.5 * (symbols[s].axis[0] + symbols[s].axis[1]);
    std::size_t best = out.size();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.size(); ++k) {
      const CorridorFoot fl = corridor_foot(boundaries[out[k].left].line, mid);
      const CorridorFoot fr = corridor_foot(boundaries[out[k].right].line, mid);
      const double span = distance(fl.point, fr.point);
      // One boundary must cover the station; the other may be continued for a
      // dash period or so.
      if (span <= 0.0 || std::min(fl.overhang, fr.overhang) > 0.0) continue;
      if (std::max(fl.overhang, fr.overhang) > 3.0 * span) continue;
      const double ratio = (fl.distance + fr.distance) / span;
      if (ratio <= 1.05 && ratio < best_ratio) {
        best_ratio = ratio;
        best = k;
      }
    }
    if (best < out.size()) out[best].symbols.push_back(s);
  }
  return out;
}

}  // namespace lanes
}  // namespace hdmap
