#include "hdmap/marking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <utility>

namespace hdmap {

std::string_view to_string(MarkingKind kind) {
  return kind == MarkingKind::kDashed ? "dashed" : "solid";
}

namespace marking {
namespace {

constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

std::vector<Pixel> neighbours(const BinaryMask& m, Pixel p) {
  std::vector<Pixel> out;
  for (int k = 0; k < 8; ++k) {
    const int x = p.x + kDx[k];
    const int y = p.y + kDy[k];
    if (m.get_or(x, y, 0)) out.push_back({x, y});
  }
  return out;
}

Polyline pixel_polyline(const std::vector<Pixel>& px, bool closed) {
  std::vector<Point2> pts;
  pts.reserve(px.size());
  for (const Pixel& p : px) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  return Polyline(std::move(pts), Unit::kPixel, closed);
}

std::vector<Point2> to_points(std::span<const Pixel> px) {
  std::vector<Point2> pts;
  pts.reserve(px.size());
  for (const Pixel& p : px) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  return pts;
}

// Pixel-space polylines plus the junction flag of each endpoint.
struct TracedPath {
  std::vector<Pixel> pixels;
  bool closed = false;
};

std::vector<TracedPath> trace_paths(const BinaryMask& sk) {
  if (!raster::is_thin(sk)) throw InvalidArgument("split_at_branches: skeleton is not thin");
  const int w = sk.width();
  const int h = sk.height();
  Raster<int> degree(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (sk(x, y)) degree(x, y) = raster::neighbor_count(sk, {x, y});

  // Junction clusters: 8-connected runs of pixels with three or more neighbours.
  Raster<int> cluster(w, h, -1);
  std::vector<Pixel> rep;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!sk(x, y) || degree(x, y) < 3 || cluster(x, y) >= 0) continue;
      const int id = static_cast<int>(rep.size());
      std::vector<Pixel> members{{x, y}};
      cluster(x, y) = id;
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (const Pixel& q : neighbours(sk, members[i])) {
          if (degree[q] >= 3 && cluster[q] < 0) {
            cluster[q] = id;
            members.push_back(q);
          }
        }
      }
      std::sort(members.begin(), members.end());
      const geometry::PrincipalAxes pa = geometry::principal_axes(to_points(members));
      Pixel best = members.front();
      double best_d = std::numeric_limits<double>::infinity();
      for (const Pixel& m : members) {
        const double d = distance({static_cast<double>(m.x), static_cast<double>(m.y)}, pa.mean);
        if (d < best_d - 1e-12 || (std::abs(d - best_d) <= 1e-12 && degree[m] > degree[best])) {
          best = m;
          best_d = d;
        }
      }
      rep.push_back(best);
    }
  }

  auto is_node = [&](Pixel p) { return degree[p] != 2; };
  auto key = [w](Pixel a, Pixel b) {
    return std::pair<long, long>{static_cast<long>(a.y) * w + a.x, static_cast<long>(b.y) * w + b.x};
  };
  std::set<std::pair<long, long>> used;
  BinaryMask visited(w, h, 0);
  std::vector<TracedPath> paths;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Pixel n{x, y};
      if (!sk[n] || !is_node(n)) continue;
      visited[n] = 1;
      for (const Pixel& q : neighbours(sk, n)) {
        if (cluster[n] >= 0 && cluster[q] == cluster[n]) continue;
        if (used.count(key(n, q))) continue;
        used.insert(key(n, q));
        TracedPath path;
        if (cluster[n] >= 0 && rep[cluster[n]] != n) path.pixels.push_back(rep[cluster[n]]);
        path.pixels.push_back(n);
        Pixel prev = n;
        Pixel cur = q;
        while (true) {
          path.pixels.push_back(cur);
          visited[cur] = 1;
          if (is_node(cur)) break;
          std::optional<Pixel> next;
          for (const Pixel& c : neighbours(sk, cur)) {
            if (c == prev) continue;
            if (is_node(c) || std::find(path.pixels.begin(), path.pixels.end(), c) == path.pixels.end()) {
              next = c;
              break;
            }
          }
          if (!next) break;
          prev = cur;
          cur = *next;
        }
        used.insert(key(cur, prev));
        if (cluster[cur] >= 0 && rep[cluster[cur]] != cur) path.pixels.push_back(rep[cluster[cur]]);
        if (path.pixels.size() > 2 && path.pixels.front() == path.pixels.back()) {
          path.pixels.pop_back();
          path.closed = true;
        }
        paths.push_back(std::move(path));
      }
    }
  }

  // Pure cycles carry no node at all.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Pixel start{x, y};
      if (!sk[start] || visited[start]) continue;
      TracedPath path;
      path.closed = true;
      Pixel prev = start;
      Pixel cur = start;
      do {
        path.pixels.push_back(cur);
        visited[cur] = 1;
        Pixel next = cur;
        for (const Pixel& c : neighbours(sk, cur)) {
          if (c != prev && !visited[c]) {
            next = c;
            break;
          }
        }
        prev = cur;
        cur = next;
      } while (cur != prev);
      if (path.pixels.size() >= 2) paths.push_back(std::move(path));
    }
  }
  return paths;
}

void prune_spurs(BinaryMask& sk, double spur_px) {
  for (int round = 0; round < 3; ++round) {
    bool removed = false;
    BinaryMask next = sk;
    for (const TracedPath& path : trace_paths(sk)) {
      if (path.closed) continue;
      const int d0 = raster::neighbor_count(sk, path.pixels.front());
      const int d1 = raster::neighbor_count(sk, path.pixels.back());
      const bool spur = (d0 <= 1 && d1 >= 3) || (d1 <= 1 && d0 >= 3);
      if (!spur) continue;
      if (pixel_polyline(path.pixels, false).length() >= spur_px) continue;
      for (const Pixel& p : path.pixels) {
        if (raster::neighbor_count(sk, p) < 3) next[p] = 0;
      }
      removed = true;
    }
    if (!removed) return;
    sk = raster::skeletonize(next);
  }
}

double direction(Point2 a, Point2 b) { return std::atan2(b.y - a.y, b.x - a.x); }

double axial_angle(Point2 v) {
  double a = std::atan2(v.y, v.x);
  if (a < 0.0) a += std::numbers::pi;
  if (a >= std::numbers::pi) a -= std::numbers::pi;
  return a;
}

}  // namespace

std::vector<Polyline> split_at_branches(const BinaryMask& skeleton) {
  std::vector<Polyline> out;
  for (const TracedPath& p : trace_paths(skeleton)) out.push_back(pixel_polyline(p.pixels, p.closed));
  return out;
}

std::vector<Polyline> split_right_angles(const Polyline& pl, double corner_turn) {
  if (!(corner_turn > 0.0 && corner_turn < 180.0)) {
    throw InvalidArgument("split_right_angles: corner_turn must be in (0, 180)");
  }
  constexpr std::size_t kWindow = 3;
  const double limit = corner_turn * kDegree - 1e-12;
  const auto pts = pl.points();
  const std::size_t n = pts.size();
  if (n < 3) return {pl};
  std::vector<double> turn(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Point2 a = pts[i >= kWindow ? i - kWindow : 0];
    const Point2 c = pts[std::min(n - 1, i + kWindow)];
    turn[i] = geometry::turn_angle(direction(a, pts[i]), direction(pts[i], c));
  }
  std::vector<std::size_t> cuts;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (turn[i] < limit) continue;
    bool strongest = true;
    for (std::size_t j = (i >= kWindow ? i - kWindow : 1); j <= std::min(n - 2, i + kWindow); ++j) {
      if (j == i || turn[j] < limit) continue;
      if (turn[j] > turn[i] || (turn[j] == turn[i] && j < i)) strongest = false;
    }
    if (strongest) cuts.push_back(i);
  }
  if (cuts.empty()) return {pl};
  std::vector<Polyline> out;
  std::size_t from = 0;
  for (std::size_t c : cuts) {
    out.emplace_back(std::vector<Point2>(pts.begin() + from, pts.begin() + c + 1), pl.unit(), false);
    from = c;
  }
  out.emplace_back(std::vector<Point2>(pts.begin() + from, pts.end()), pl.unit(), false);
  return out;
}

std::vector<DashComponent> detect_dashes(const ComponentSet& cs, const GeoReference& ref,
                                         const DashParams& params) {
  if (!(params.min_len > 0.0 && params.max_len > 0.0 && params.max_width > 0.0)) {
    throw InvalidArgument("detect_dashes: bounds must be positive");
  }
  if (!(params.min_len < params.max_len)) throw InvalidArgument("detect_dashes: min_len >= max_len");
  std::vector<DashComponent> out;
  for (const Component& comp : cs.components) {
    const std::vector<Point2> pts = to_points(comp.pixels);
    const geometry::PrincipalAxes pa = geometry::principal_axes(pts);
    const Point2 minor{-pa.major.y, pa.major.x};
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    double wlo = lo, whi = -lo;
    for (const Point2& p : pts) {
      const Point2 d = p - pa.mean;
      lo = std::min(lo, dot(d, pa.major));
      hi = std::max(hi, dot(d, pa.major));
      wlo = std::min(wlo, dot(d, minor));
      whi = std::max(whi, dot(d, minor));
    }
    // A pixel covers one unit of extent beyond its centre-to-centre span.
    const double length = (hi - lo + 1.0) * ref.gsd;
    const double width = (whi - wlo + 1.0) * ref.gsd;
    if (length < params.min_len || length > params.max_len || width > params.max_width) continue;
    const UtmCoordinate c = geo::pixel_to_utm(pa.mean, ref);
    DashComponent dash;
    dash.component = comp.label;
    dash.centroid = {c.easting, c.northing};
    dash.length = length;
    dash.width = width;
    dash.orientation = axial_angle({pa.major.x, -pa.major.y});
    dash.pixel_count = comp.size();
    out.push_back(dash);
  }
  return out;
}

std::vector<std::vector<std::size_t>> group_dashes(std::span<const DashComponent> dashes,
                                                   const GroupParams& params) {
  if (!(params.gap_max > 0.0 && params.len_tol > 0.0 && params.angle_tol > 0.0 &&
        params.lateral_tol > 0.0)) {
    throw InvalidArgument("group_dashes: tolerances must be positive");
  }
  const std::size_t n = dashes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const DashComponent& da = dashes[a];
    const DashComponent& db = dashes[b];
    if (da.length != db.length) return da.length > db.length;
    if (da.centroid.x != db.centroid.x) return da.centroid.x < db.centroid.x;
    return da.centroid.y < db.centroid.y;
  });

  const double angle_tol = params.angle_tol * kDegree;
  std::vector<char> grouped(n, 0);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t seed : order) {
    if (grouped[seed]) continue;
    std::vector<std::size_t> group{seed};
    grouped[seed] = 1;
    double length_sum = dashes[seed].length;
    while (true) {
      const double mean_len = length_sum / static_cast<double>(group.size());
      std::size_t best = n;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < n; ++d) {
        if (grouped[d]) continue;
        const DashComponent& cand = dashes[d];
        std::size_t m = group.front();
        double md = std::numeric_limits<double>::infinity();
        for (std::size_t g : group) {
          const double dd = distance(cand.centroid, dashes[g].centroid);
          if (dd < md) {
            md = dd;
            m = g;
          }
        }
        const DashComponent& near = dashes[m];
        const Point2 axis{std::cos(near.orientation), std::sin(near.orientation)};
        const Point2 diff = cand.centroid - near.centroid;
        const double gap = std::abs(dot(diff, axis)) - 0.5 * (cand.length + near.length);
        if (gap > params.gap_max) continue;
        if (std::abs(cross(axis, diff)) > params.lateral_tol) continue;
        if (geometry::axial_difference(cand.orientation, near.orientation) > angle_tol) continue;
        if (std::abs(cand.length - mean_len) > params.len_tol * mean_len) continue;
        if (md < best_d) {
          best_d = md;
          best = d;
        }
      }
      if (best == n) break;
      group.push_back(best);
      grouped[best] = 1;
      length_sum += dashes[best].length;
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<MarkingPath> marking_paths(const SemanticMask& mask, const GeoReference& ref,
                                       const MarkingParams& params) {
  const BinaryMask mm = raster::class_mask(mask, {ClassId::kLaneMarking});
  const ComponentSet cs = raster::connected_components(mm, Connectivity::kEight);
  BinaryMask sk = raster::skeletonize(mm);
  prune_spurs(sk, params.spur_length / ref.gsd);
  std::vector<MarkingPath> out;
  for (const Polyline& path : split_at_branches(sk)) {
    const Point2 first = path.front();
    const int comp = cs.labels(static_cast<int>(first.x), static_cast<int>(first.y));
    const Polyline simple =
        geo::pixels_to_utm(geometry::simplify(path, params.simplify_tolerance / ref.gsd), ref);
    for (Polyline& piece : split_right_angles(simple.opened(), params.corner_turn)) {
      if (piece.length() >= params.min_length) out.push_back({std::move(piece), comp});
    }
  }
  return out;
}

std::vector<Polyline> marking_centerlines(const SemanticMask& mask, const GeoReference& ref,
                                          const MarkingParams& params) {
  std::vector<Polyline> out;
  for (MarkingPath& p : marking_paths(mask, ref, params)) out.push_back(std::move(p.line));
  return out;
}

std::vector<LaneMarking> classify_markings(std::span<const MarkingPath> paths,
                                           std::span<const DashComponent> dashes,
                                           std::span<const std::vector<std::size_t>> groups) {
  std::set<int> dashed_components;
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    for (std::size_t i : g) dashed_components.insert(dashes[i].component);
  }
  std::vector<LaneMarking> out;
  for (const MarkingPath& p : paths) {
    if (!dashed_components.count(p.component)) out.push_back({p.line, MarkingKind::kSolid, {}});
  }
  for (const auto& g : groups) {
    if (g.size() < 2) continue;
    std::vector<Point2> centroids;
    for (std::size_t i : g) centroids.push_back(dashes[i].centroid);
    const geometry::PrincipalAxes pa = geometry::principal_axes(centroids);
    std::vector<std::size_t> members(g.begin(), g.end());
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return dot(dashes[a].centroid - pa.mean, pa.major) < dot(dashes[b].centroid - pa.mean, pa.major);
    });
    std::vector<Point2> pts;
    std::vector<int> ids;
    for (std::size_t i : members) {
      pts.push_back(dashes[i].centroid);
      ids.push_back(dashes[i].component);
    }
    out.push_back({Polyline(std::move(pts), Unit::kMetre, false), MarkingKind::kDashed, std::move(ids)});
  }
  return out;
}

MarkingResult extract_markings(const SemanticMask& mask, const GeoReference& ref,
                               const MarkingParams& params) {
  MarkingResult r;
  const BinaryMask mm = raster::class_mask(mask, {ClassId::kLaneMarking});
  const ComponentSet cs = raster::connected_components(mm, Connectivity::kEight);
  r.dashes = detect_dashes(cs, ref, params.dash);
  r.groups = group_dashes(r.dashes, params.group);
  const std::vector<MarkingPath> paths = marking_paths(mask, ref, params);
  r.markings = classify_markings(paths, r.dashes, r.groups);
  return r;
}

}  // namespace marking
}  // namespace hdmap
