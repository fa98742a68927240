#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "hdmap/marking.hpp"
#include "hdmap/synth.hpp"
#include "oracles.hpp"

using namespace hdmap;

namespace {

GeoReference test_ref() {
  GeoReference r;
  r.origin_easting = 400000.0;
  r.origin_northing = 5500000.0;
  return r;
}

void stroke(BinaryMask& m, Pixel from, int dx, int dy, int n) {
  for (int k = 0; k <= n; ++k) m(from.x + k * dx, from.y + k * dy) = 1;
}

std::set<Pixel> path_pixels(const Polyline& pl) {
  std::set<Pixel> s;
  for (const Point2& p : pl.points()) s.insert({int(std::lround(p.x)), int(std::lround(p.y))});
  return s;
}

void expect_paths_share(const std::vector<Polyline>& paths, Point2 junction) {
  for (const auto& p : paths) EXPECT_TRUE(p.front() == junction || p.back() == junction);
}

/// Oracle grouping: connected components of the symmetric "consecutive dash"
/// relation over all pairs (union-find on brute-force pair tests).
std::vector<int> pairwise_groups(const std::vector<DashComponent>& d, double gap_max,
                                 double angle_tol_deg, double lateral_tol) {
  std::vector<int> parent(d.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const Point2 axis{std::cos(d[i].orientation), std::sin(d[i].orientation)};
      const Point2 off = d[j].centroid - d[i].centroid;
      const double along = std::abs(dot(off, axis));
      const double lateral = std::abs(cross(axis, off));
      const double gap = along - 0.5 * (d[i].length + d[j].length);
      if (gap <= gap_max && lateral <= lateral_tol &&
          geometry::axial_difference(d[i].orientation, d[j].orientation) <= angle_tol_deg * kDegree)
        parent[find(int(i))] = find(int(j));
    }
  std::vector<int> g(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) g[i] = find(int(i));
  return g;
}

std::vector<int> group_ids(const std::vector<std::vector<std::size_t>>& groups, std::size_t n) {
  std::vector<int> id(n, -1);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t i : groups[g]) id[i] = int(g);
  return id;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

DashComponent dash(double x, double y, double len, double orientation = 0.0) {
  DashComponent d;
  d.centroid = {x, y};
  d.length = len;
  d.width = 0.15;
  d.orientation = orientation;
  d.pixel_count = 100;
  return d;
}

}  // namespace

TEST(SplitAtBranches, StraightLine) {
  BinaryMask m(30, 10, 0);
  stroke(m, {2, 5}, 1, 0, 20);
  const auto paths = marking::split_at_branches(m);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].size(), 21u);
}

TEST(SplitAtBranches, YTAndX) {
  BinaryMask y(40, 40, 0);
  stroke(y, {20, 20}, -1, -1, 10);
  stroke(y, {20, 20}, 1, -1, 10);
  stroke(y, {20, 20}, 0, 1, 12);
  auto p = marking::split_at_branches(y);
  EXPECT_EQ(p.size(), 3u);
  expect_paths_share(p, {20, 20});

  BinaryMask t(40, 40, 0);
  stroke(t, {5, 20}, 1, 0, 30);
  stroke(t, {20, 21}, 0, 1, 12);
  p = marking::split_at_branches(t);
  EXPECT_EQ(p.size(), 3u);
  expect_paths_share(p, {20, 20});

  BinaryMask x(40, 40, 0);
  stroke(x, {5, 20}, 1, 0, 30);
  stroke(x, {20, 5}, 0, 1, 30);
  p = marking::split_at_branches(x);
  EXPECT_EQ(p.size(), 4u);
  expect_paths_share(p, {20, 20});
}

TEST(SplitAtBranches, CoversSkeletonAndInteriorsHaveTwoNeighbours) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sk = raster::skeletonize(oracle::random_blobs(rng, 90, 90, 5));
    const auto paths = marking::split_at_branches(sk);
    std::set<Pixel> covered;
    for (const auto& pl : paths) {
      const auto px = path_pixels(pl);
      covered.insert(px.begin(), px.end());
      if (pl.closed()) continue;
      // A junction spanning several pixels is entered through one of them and
      // closed at its representative, so only the second and second-to-last
      // vertices may be junction pixels.
      for (std::size_t i = 1; i + 1 < pl.size(); ++i) {
        const Pixel q{int(pl[i].x), int(pl[i].y)};
        const int n = raster::neighbor_count(sk, q);
        if (n == 2) continue;
        ASSERT_TRUE(i == 1 || i + 2 == pl.size()) << q.x << "," << q.y;
        const Point2 end = i == 1 ? pl.front() : pl.back();
        EXPECT_GE(raster::neighbor_count(sk, {int(end.x), int(end.y)}), 3);
        EXPECT_LE(std::max(std::abs(end.x - q.x), std::abs(end.y - q.y)), 1.0);
      }
    }
    for (int yy = 0; yy < sk.height(); ++yy)
      for (int xx = 0; xx < sk.width(); ++xx) {
        if (!sk(xx, yy)) continue;
        const bool isolated = raster::neighbor_count(sk, {xx, yy}) == 0;
        EXPECT_TRUE(isolated || covered.count({xx, yy})) << xx << "," << yy;
      }
  }
}

TEST(SplitAtBranches, RejectsThickInput) {
  BinaryMask m(5, 5, 0);
  m(1, 1) = m(2, 1) = m(1, 2) = m(2, 2) = 1;
  EXPECT_THROW(marking::split_at_branches(m), InvalidArgument);
}

TEST(SplitRightAngles, StraightAndStopLine) {
  std::vector<Point2> line;
  for (int i = 0; i <= 60; ++i) line.push_back({double(i), 10.0});
  EXPECT_EQ(marking::split_right_angles(Polyline(line, Unit::kPixel), 60).size(), 1u);
  for (int i = 1; i <= 30; ++i) line.push_back({60.0, 10.0 + i});
  const auto parts = marking::split_right_angles(Polyline(line, Unit::kPixel), 60);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].back(), Point2(60, 10));
}

TEST(SplitRightAngles, SeventyDegreeBendOnPixelChain) {
  // Rasterized legs so the staircase noise is present.
  std::vector<Point2> pts;
  for (int i = 0; i <= 40; ++i) pts.push_back({double(i), 50.0});
  const double a = 70.0 * kDegree;
  for (int i = 1; i <= 40; ++i) pts.push_back({std::round(40 + i * std::cos(a)), std::round(50 + i * std::sin(a))});
  const Polyline pl(pts, Unit::kPixel);
  // The rounded second leg deviates from 70 degrees locally, so take the
  // threshold just under the true bend.
  const double true_turn = 70.0;
  EXPECT_EQ(marking::split_right_angles(pl, true_turn - 5).size(), 2u);
  EXPECT_EQ(marking::split_right_angles(pl, 85).size(), 1u);
}

TEST(DetectDashes, SizeFilter) {
  const auto ref = test_ref();
  BinaryMask m(800, 100, 0);
  for (int y = 10; y < 13; ++y)
    for (int x = 10; x < 50; ++x) m(x, y) = 1;  // 2 m x 0.15 m
  for (int y = 40; y < 43; ++y)
    for (int x = 10; x < 610; ++x) m(x, y) = 1;  // 30 m
  m(700, 80) = m(701, 80) = 1;                   // speck
  const auto cs = raster::connected_components(m, Connectivity::kEight);
  const auto d = marking::detect_dashes(cs, ref);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NEAR(d[0].length, 2.0, 0.05);
  EXPECT_NEAR(d[0].width, 0.15, 0.05);
  EXPECT_LT(geometry::axial_difference(d[0].orientation, 0.0), 1e-9);
  const UtmCoordinate c = geo::pixel_to_utm({29.5, 11.0}, ref);
  EXPECT_NEAR(d[0].centroid.x, c.easting, 1e-6);
  EXPECT_NEAR(d[0].centroid.y, c.northing, 1e-6);
}

TEST(GroupDashes, CollinearChain) {
  std::vector<DashComponent> d;
  for (int i = 0; i < 5; ++i) d.push_back(dash(6.0 * i, 0.0, 3.0));
  const auto g = marking::group_dashes(d);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].size(), 5u);
  EXPECT_EQ(marking::group_dashes(std::vector<DashComponent>{dash(0, 0, 2)}).size(), 1u);
}

TEST(GroupDashes, ParallelChainsStaySeparate) {
  std::vector<DashComponent> d;
  for (int i = 0; i < 5; ++i) {
    d.push_back(dash(6.0 * i, 0.0, 3.0));
    d.push_back(dash(6.0 * i + 1.0, 3.5, 3.0));
  }
  const auto g = marking::group_dashes(d);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_TRUE(same_partition(group_ids(g, d.size()), pairwise_groups(d, 6.0, 15.0, 0.75)));
}

TEST(GroupDashes, PartitionAndOrderInsensitivity) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05), heading(0.0, std::numbers::pi);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<DashComponent> d;
    const int chains = 3;
    for (int c = 0; c < chains; ++c) {
      const double th = heading(rng);
      const Point2 dir{std::cos(th), std::sin(th)};
      const Point2 base{60.0 * c, 0.0};  // chains stay > 2 * gap_max apart
      for (int i = 0; i < 4; ++i) {
        const Point2 p = base + (7.0 * i) * dir;
        d.push_back(dash(p.x + jitter(rng), p.y + jitter(rng), 3.0 + jitter(rng), std::fmod(th + jitter(rng) + std::numbers::pi, std::numbers::pi)));
      }
    }
    const auto g = marking::group_dashes(d);
    const auto ids = group_ids(g, d.size());
    for (int v : ids) EXPECT_GE(v, 0);
    std::size_t members = 0;
    for (const auto& grp : g) members += grp.size();
    EXPECT_EQ(members, d.size());
    EXPECT_EQ(g.size(), std::size_t(chains));
    EXPECT_TRUE(same_partition(ids, pairwise_groups(d, 6.0, 15.0, 0.75)));

    std::vector<std::size_t> perm(d.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<DashComponent> shuffled;
    for (std::size_t i : perm) shuffled.push_back(d[i]);
    const auto ids2 = group_ids(marking::group_dashes(shuffled), d.size());
    std::vector<int> back(d.size());
    for (std::size_t k = 0; k < perm.size(); ++k) back[perm[k]] = ids2[k];
    EXPECT_TRUE(same_partition(ids, back));
  }
}

TEST(GroupDashes, LengthGate) {
  std::vector<DashComponent> d = {dash(0, 0, 3.0), dash(6, 0, 3.0), dash(11.5, 0, 0.8)};
  const auto g = marking::group_dashes(d);
  EXPECT_EQ(g.size(), 2u);
}

TEST(Centerlines, ThreePixelLine) {
  const auto ref = test_ref();
  SemanticMask m(200, 60, ClassId::kRoad);
  for (int y = 29; y <= 31; ++y)
    for (int x = 20; x < 180; ++x) m.set(x, y, ClassId::kLaneMarking);
  const auto lines = marking::marking_centerlines(m, ref);
  ASSERT_EQ(lines.size(), 1u);
  for (const Point2& p : lines[0].points()) {
    const Point2 px = geo::utm_to_pixel({p.x, p.y}, ref);
    EXPECT_LE(std::abs(px.y - 30.0), 1.0);
  }
  EXPECT_TRUE(marking::marking_centerlines(SemanticMask(50, 50, ClassId::kRoad), ref).empty());
}

TEST(Centerlines, SyntheticSolidDivider) {
  SceneSpec spec;
  spec.kind = SceneKind::kStraight;
  spec.divider = MarkingKind::kSolid;
  spec.arrows = 0;
  spec.seed = 3;
  const auto scene = synth::generate(spec);
  std::vector<Point2> truth;
  for (const auto& [id, ls] : scene.reference.linestrings)
    if (ls.tags.at("type") == "line_thin") truth = scene.reference.geometry(ls);
  ASSERT_FALSE(truth.empty());
  const auto lines = marking::marking_centerlines(scene.mask, scene.georef);
  ASSERT_EQ(lines.size(), 1u);
  const auto pts = geometry::resample_uniform(lines[0], 0.1);
  double sum = 0.0;
  for (const Point2& p : pts.points()) sum += oracle::chain_dist(truth, p);
  EXPECT_LE(sum / pts.size(), 0.05);
}

TEST(ClassifyMarkings, MixedScene) {
  const auto ref = test_ref();
  SemanticMask m(1000, 300, ClassId::kRoad);
  for (int y = 50; y < 53; ++y)
    for (int x = 10; x < 990; ++x) m.set(x, y, ClassId::kLaneMarking);
  for (int y = 250; y < 253; ++y)
    for (int x = 10; x < 990; ++x) m.set(x, y, ClassId::kLaneMarking);
  int dashes = 0;
  for (int x0 = 20; x0 + 60 < 990; x0 += 160, ++dashes)
    for (int y = 150; y < 153; ++y)
      for (int x = x0; x < x0 + 60; ++x) m.set(x, y, ClassId::kLaneMarking);
  const auto r = marking::extract_markings(m, ref);
  ASSERT_EQ(r.markings.size(), 3u);
  int solid = 0, dashed = 0;
  for (const auto& mk : r.markings) {
    if (mk.kind == MarkingKind::kSolid) {
      ++solid;
      EXPECT_TRUE(mk.member_dashes.empty());
    } else {
      ++dashed;
      EXPECT_EQ(int(mk.member_dashes.size()), dashes);
      EXPECT_EQ(int(mk.line.size()), dashes);
      // Monotone along the chain axis.
      for (std::size_t i = 1; i < mk.line.size(); ++i) EXPECT_GT(mk.line[i].x, mk.line[i - 1].x);
    }
  }
  EXPECT_EQ(solid, 2);
  EXPECT_EQ(dashed, 1);
}

TEST(ClassifyMarkings, GroupOfFive) {
  std::vector<DashComponent> d;
  for (int i = 0; i < 5; ++i) {
    d.push_back(dash(6.0 * (4 - i), 0.0, 3.0));
    d.back().component = i + 1;
  }
  const std::vector<std::vector<std::size_t>> groups = {{0, 1, 2, 3, 4}};
  const auto out = marking::classify_markings({}, d, groups);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, MarkingKind::kDashed);
  EXPECT_EQ(out[0].line.size(), 5u);
}
