#include "hdmap/raster.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>

namespace hdmap {

SemanticMask::SemanticMask(int width, int height, ClassId fill)
    : raster_(width, height, raw(fill)) {}

SemanticMask::SemanticMask(int width, int height, std::vector<std::uint8_t> data)
    : raster_(width, height) {
  if (data.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("mask data size does not match dimensions");
  }
  auto out = raster_.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!ClassCatalog::is_valid(data[i])) {
      throw InvalidArgument("invalid class id " + std::to_string(data[i]));
    }
    out[i] = data[i];
  }
}

namespace raster {

Polyline Contour::to_polyline() const {
  std::vector<Point2> pts;
  pts.reserve(pixels.size());
  for (const Pixel& p : pixels) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  return Polyline(std::move(pts), Unit::kPixel, true);
}

namespace {

// Clockwise on screen (y down), starting east.
constexpr std::array<Pixel, 8> kDirs = {{{1, 0}, {1, 1}, {0, 1}, {-1, 1},
                                         {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int direction_of(int dx, int dy) {
  for (int d = 0; d < 8; ++d) {
    if (kDirs[d].x == dx && kDirs[d].y == dy) return d;
  }
  return -1;
}

inline bool fg(const BinaryMask& m, int x, int y) { return m.get_or(x, y, 0) != 0; }

// Neighbours in Zhang-Suen order P2..P9: N, NE, E, SE, S, SW, W, NW.
std::array<int, 8> zs_neighbors(const BinaryMask& m, int x, int y) {
  return {fg(m, x, y - 1), fg(m, x + 1, y - 1), fg(m, x + 1, y),     fg(m, x + 1, y + 1),
          fg(m, x, y + 1), fg(m, x - 1, y + 1), fg(m, x - 1, y), fg(m, x - 1, y - 1)};
}

// Yokoi connectivity number for 8-connected foreground. A pixel is simple
// (removable without changing topology) iff this equals 1.
int yokoi8(const BinaryMask& m, int x, int y) {
  // E, NE, N, NW, W, SW, S, SE
  const std::array<int, 8> v = {fg(m, x + 1, y),     fg(m, x + 1, y - 1), fg(m, x, y - 1),
                                fg(m, x - 1, y - 1), fg(m, x - 1, y),     fg(m, x - 1, y + 1),
                                fg(m, x, y + 1),     fg(m, x + 1, y + 1)};
  int c = 0;
  for (int k = 0; k < 8; k += 2) {
    const int a = 1 - v[k];
    const int b = 1 - v[(k + 1) % 8];
    const int d = 1 - v[(k + 2) % 8];
    c += a - a * b * d;
  }
  return c;
}

int count8(const BinaryMask& m, int x, int y) {
  int n = 0;
  for (const Pixel& d : kDirs) n += fg(m, x + d.x, y + d.y);
  return n;
}

struct DisjointSet {
  std::vector<int> parent;
  int make() {
    parent.push_back(static_cast<int>(parent.size()));
    return parent.back();
  }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Moore-neighbour boundary following. `back` is the direction from `start`
// to a background pixel of the region being circled.
std::vector<Pixel> follow_boundary(const BinaryMask& m, Pixel start, int back) {
  std::vector<Pixel> out{start};
  auto step = [&](Pixel c, int from, int& new_from) -> std::optional<Pixel> {
    for (int i = 1; i <= 8; ++i) {
      const int d = (from + i) % 8;
      const Pixel q{c.x + kDirs[d].x, c.y + kDirs[d].y};
      if (fg(m, q.x, q.y)) {
        const int prev = (d + 7) % 8;
        const Pixel b{c.x + kDirs[prev].x, c.y + kDirs[prev].y};
        new_from = direction_of(b.x - q.x, b.y - q.y);
        return q;
      }
    }
    return std::nullopt;
  };

  int from = back;
  int next_from = 0;
  const auto first = step(start, from, next_from);
  if (!first) return out;  // isolated pixel
  Pixel cur = *first;
  from = next_from;
  // Jacob's stopping criterion: stop when start is left towards `first` again.
  for (;;) {
    const auto nxt = step(cur, from, next_from);
    if (cur == start && *nxt == *first) break;
    out.push_back(cur);
    cur = *nxt;
    from = next_from;
  }
  return out;
}

}  // namespace

BinaryMask class_mask(const SemanticMask& mask, std::span<const ClassId> classes) {
  std::array<std::uint8_t, ClassCatalog::kSize> lut{};
  for (ClassId c : classes) lut[raw(c)] = 1;
  BinaryMask out(mask.width(), mask.height());
  const auto in = mask.raw_raster().data();
  auto dst = out.data();
  for (std::size_t i = 0; i < in.size(); ++i) dst[i] = lut[in[i]];
  return out;
}

BinaryMask class_mask(const SemanticMask& mask, std::initializer_list<ClassId> classes) {
  return class_mask(mask, std::span<const ClassId>(classes.begin(), classes.size()));
}

BinaryMask class_mask(const SemanticMask& mask, std::span<const std::uint8_t> raw_classes) {
  std::vector<ClassId> ids;
  for (std::uint8_t r : raw_classes) {
    const auto id = ClassCatalog::from_raw(r);
    if (!id) throw InvalidArgument("unknown class id " + std::to_string(r));
    ids.push_back(*id);
  }
  return class_mask(mask, std::span<const ClassId>(ids));
}

ComponentSet connected_components(const BinaryMask& mask, Connectivity connectivity) {
  const int w = mask.width();
  const int h = mask.height();
  ComponentSet cs{Raster<int>(w, h, 0), {}};
  Raster<int> provisional(w, h, -1);
  DisjointSet ds;
  const bool eight = connectivity == Connectivity::kEight;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y)) continue;
      int label = -1;
      auto join = [&](int nx, int ny) {
        if (!provisional.contains(nx, ny)) return;
        const int l = provisional(nx, ny);
        if (l < 0) return;
        if (label < 0) {
          label = l;
        } else {
          ds.unite(label, l);
        }
      };
      join(x - 1, y);
      join(x, y - 1);
      if (eight) {
        join(x - 1, y - 1);
        join(x + 1, y - 1);
      }
      provisional(x, y) = label >= 0 ? label : ds.make();
    }
  }

  std::vector<int> dense(ds.parent.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = provisional(x, y);
      if (l < 0) continue;
      const int root = ds.find(l);
      if (dense[root] == 0) {
        cs.components.push_back(Component{static_cast<int>(cs.components.size()) + 1,
                                          BoundingBox{x, y, x, y}, {}});
        dense[root] = static_cast<int>(cs.components.size());
      }
      const int k = dense[root];
      cs.labels(x, y) = k;
      Component& c = cs.components[k - 1];
      c.pixels.push_back({x, y});
      c.bbox.min_x = std::min(c.bbox.min_x, x);
      c.bbox.max_x = std::max(c.bbox.max_x, x);
      c.bbox.min_y = std::min(c.bbox.min_y, y);
      c.bbox.max_y = std::max(c.bbox.max_y, y);
    }
  }
  return cs;
}

ComponentSet filter_components(const ComponentSet& cs, std::size_t min_px, std::size_t max_px) {
  if (min_px > max_px) throw InvalidArgument("filter_components: min_px > max_px");
  ComponentSet out{Raster<int>(cs.labels.width(), cs.labels.height(), 0), {}};
  for (const Component& c : cs.components) {
    if (c.size() < min_px || c.size() > max_px) continue;
    Component kept = c;
    kept.label = static_cast<int>(out.components.size()) + 1;
    for (const Pixel& p : kept.pixels) out.labels[p] = kept.label;
    out.components.push_back(std::move(kept));
  }
  return out;
}

namespace {

/// Chamfer 3-4 distance to the nearest background pixel (off-raster counts as
/// background). A unit step costs 3, a diagonal step 4.
Raster<int> chamfer_distance(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  constexpr int kFar = std::numeric_limits<int>::max() / 2;
  Raster<int> d(w, h, 0);
  auto at = [&](int x, int y) { return d.contains(x, y) ? d(x, y) : 0; };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(x, y)) continue;
      d(x, y) = std::min({kFar, at(x - 1, y) + 3, at(x, y - 1) + 3, at(x - 1, y - 1) + 4, at(x + 1, y - 1) + 4});
    }
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      if (!mask(x, y)) continue;
      d(x, y) = std::min({d(x, y), at(x + 1, y) + 3, at(x, y + 1) + 3, at(x + 1, y + 1) + 4, at(x - 1, y + 1) + 4});
    }
  }
  return d;
}

/// One round of two-subcycle deletions. Anchored pixels are never removed;
/// when `retract_ends` is set, unanchored line ends may be removed too.
bool thinning_round(BinaryMask& out, std::vector<Pixel>& active, const BinaryMask* anchor, bool retract_ends) {
  bool changed = false;
  std::vector<Pixel> candidates;
  const int min_b = retract_ends ? 1 : 2;
  for (int pass = 0; pass < 2; ++pass) {
    candidates.clear();
    for (const Pixel& p : active) {
      if (!out[p] || (anchor && (*anchor)[p])) continue;
      const auto n = zs_neighbors(out, p.x, p.y);
      const int b = std::accumulate(n.begin(), n.end(), 0);
      if (b < min_b || b > 6) continue;
      int a = 0;
      for (int i = 0; i < 8; ++i) a += (n[i] == 0 && n[(i + 1) % 8] == 1);
      if (a != 1) continue;
      // n[0]=P2 (N), n[2]=P4 (E), n[4]=P6 (S), n[6]=P8 (W)
      if (pass == 0) {
        if (n[0] * n[2] * n[4] != 0 || n[2] * n[4] * n[6] != 0) continue;
      } else {
        if (n[0] * n[2] * n[6] != 0 || n[0] * n[4] * n[6] != 0) continue;
      }
      candidates.push_back(p);
    }
    // Sequential re-check keeps 2-px diagonals and 2x2 blocks from vanishing.
    for (const Pixel& p : candidates) {
      if (count8(out, p.x, p.y) >= min_b && yokoi8(out, p.x, p.y) == 1) {
        out[p] = 0;
        changed = true;
      }
    }
  }
  std::erase_if(active, [&](const Pixel& p) { return !out[p]; });
  return changed;
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  {
    auto src = mask.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 1 : 0;
  }

  // Ridge of the distance map: pixels no closer to the background than any
  // neighbour. Thinning keeps them and retracts everything else, so corners
  // leave no spurs and round blobs shrink towards their centre.
  const Raster<int> dist = chamfer_distance(out);
  BinaryMask ridge(out.width(), out.height(), 0);
  std::vector<Pixel> active;
  for (int y = 0; y < out.height(); ++y) {
    for (int x = 0; x < out.width(); ++x) {
      if (!out(x, y)) continue;
      active.push_back({x, y});
      bool top = true;
      for (int dy = -1; dy <= 1 && top; ++dy)
        for (int dx = -1; dx <= 1 && top; ++dx)
          if (dist.contains(x + dx, y + dy) && dist(x + dx, y + dy) > dist(x, y)) top = false;
      ridge(x, y) = top ? 1 : 0;
    }
  }

  while (thinning_round(out, active, &ridge, true)) {
  }
  // Ridge plateaus can be two pixels wide; plain thinning finishes them.
  while (thinning_round(out, active, nullptr, false)) {
  }

  // Remove 4-connected staircase corners so every path pixel has exactly two
  // 8-neighbours and junctions are not inflated.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Pixel& p : active) {
      if (!out[p]) continue;
      const bool n = fg(out, p.x, p.y - 1);
      const bool e = fg(out, p.x + 1, p.y);
      const bool s = fg(out, p.x, p.y + 1);
      const bool w = fg(out, p.x - 1, p.y);
      const bool corner = (n && e) || (e && s) || (s && w) || (w && n);
      if (!corner) continue;
      if (count8(out, p.x, p.y) >= 2 && yokoi8(out, p.x, p.y) == 1) {
        out[p] = 0;
        changed = true;
      }
    }
    std::erase_if(active, [&](const Pixel& p) { return !out[p]; });
  }
  return out;
}

bool is_thin(const BinaryMask& mask) {
  for (int y = 0; y + 1 < mask.height(); ++y) {
    for (int x = 0; x + 1 < mask.width(); ++x) {
      if (mask(x, y) && mask(x + 1, y) && mask(x, y + 1) && mask(x + 1, y + 1)) return false;
    }
  }
  return true;
}

namespace {

// The tracer walks clockwise around components as seen north-up; keep the
// start pixel and flip the direction.
void reverse_winding(std::vector<Pixel>& ring) {
  if (ring.size() > 2) std::reverse(ring.begin() + 1, ring.end());
}

}  // namespace

std::vector<Contour> trace_contours(const BinaryMask& mask) {
  std::vector<Contour> out;
  const ComponentSet fgc = connected_components(mask, Connectivity::kEight);
  if (fgc.components.empty()) return out;

  BinaryMask background(mask.width(), mask.height());
  {
    auto src = mask.data();
    auto dst = background.data();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 0 : 1;
  }
  const ComponentSet bgc = connected_components(background, Connectivity::kFour);

  std::vector<std::vector<Pixel>> holes_of(fgc.components.size() + 1);
  for (const Component& hole : bgc.components) {
    const BoundingBox& b = hole.bbox;
    if (b.min_x == 0 || b.min_y == 0 || b.max_x == mask.width() - 1 ||
        b.max_y == mask.height() - 1) {
      continue;  // connected to the outside
    }
    const Pixel h = hole.pixels.front();  // first in raster order
    const Pixel above{h.x, h.y - 1};
    holes_of[fgc.labels[above]].push_back(above);
  }

  for (const Component& c : fgc.components) {
    Contour outer;
    outer.pixels = follow_boundary(mask, c.pixels.front(), 4);
    reverse_winding(outer.pixels);
    outer.component = c.label;
    out.push_back(std::move(outer));
    for (const Pixel& s : holes_of[c.label]) {
      Contour hole;
      hole.pixels = follow_boundary(mask, s, 2);
      reverse_winding(hole.pixels);
      hole.is_hole = true;
      hole.component = c.label;
      out.push_back(std::move(hole));
    }
  }
  return out;
}

int neighbor_count(const BinaryMask& skeleton, Pixel p) {
  if (!skeleton.contains(p)) throw InvalidArgument("neighbor_count: pixel outside raster");
  return count8(skeleton, p.x, p.y);
}

std::size_t count_set(const BinaryMask& mask) {
  const auto d = mask.data();
  return static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](auto v) { return v != 0; }));
}

BinaryMask majority_filter(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height(), 0);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      int set = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) set += mask.get_or(x + dx, y + dy, 0) ? 1 : 0;
      out(x, y) = set >= 5 ? 1 : 0;
    }
  }
  return out;
}

}  // namespace raster
}  // namespace hdmap
