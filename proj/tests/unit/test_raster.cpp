#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "hdmap/raster.hpp"
#include "oracles.hpp"

using namespace hdmap;

namespace {

SemanticMask filled(int w, int h, ClassId id) { return SemanticMask(w, h, id); }

BinaryMask rect(int w, int h, int x0, int y0, int x1, int y1) {
  BinaryMask m(w, h, 0);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) m(x, y) = 1;
  return m;
}

}  // namespace

TEST(ClassMask, AllRoad) {
  auto m = filled(8, 6, ClassId::kRoad);
  EXPECT_EQ(raster::count_set(raster::class_mask(m, {ClassId::kRoad})), 48u);
  EXPECT_EQ(raster::count_set(raster::class_mask(m, {ClassId::kWalkway})), 0u);
}

TEST(ClassMask, CheckerboardMatchesMembership) {
  SemanticMask m(9, 7);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 9; ++x) m.set(x, y, (x + y) % 2 ? ClassId::kRoad : ClassId::kVegetation);
  auto b = raster::class_mask(m, {ClassId::kRoad, ClassId::kLaneMarking, ClassId::kSymbol});
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 9; ++x) EXPECT_EQ(b(x, y) != 0, (x + y) % 2 == 1);
}

TEST(ClassMask, UnionOfDisjointSets) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> cls(0, 8);
  SemanticMask m(20, 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) m.set(x, y, static_cast<ClassId>(cls(rng)));
  auto a = raster::class_mask(m, {ClassId::kRoad, ClassId::kParking});
  auto b = raster::class_mask(m, {ClassId::kSymbol});
  auto ab = raster::class_mask(m, {ClassId::kRoad, ClassId::kParking, ClassId::kSymbol});
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) EXPECT_EQ(ab(x, y), (a(x, y) | b(x, y)));
}

TEST(ClassMask, UnknownRawIdThrows) {
  auto m = filled(2, 2, ClassId::kRoad);
  const std::vector<std::uint8_t> ids = {1, 9};
  EXPECT_THROW(raster::class_mask(m, ids), InvalidArgument);
  EXPECT_THROW(SemanticMask(1, 1, std::vector<std::uint8_t>{12}), InvalidArgument);
}

TEST(Components, EmptyAndDiagonal) {
  BinaryMask m(4, 4, 0);
  EXPECT_TRUE(raster::connected_components(m, Connectivity::kEight).components.empty());
  m(1, 1) = 1;
  m(2, 2) = 1;
  EXPECT_EQ(raster::connected_components(m, Connectivity::kEight).components.size(), 1u);
  EXPECT_EQ(raster::connected_components(m, Connectivity::kFour).components.size(), 2u);
}

TEST(Components, MatchFloodFillOracle) {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution coin(0.45);
  for (int trial = 0; trial < 100; ++trial) {
    BinaryMask m(64, 64, 0);
    for (auto& v : m.data()) v = coin(rng) ? 1 : 0;
    for (bool eight : {false, true}) {
      const auto cs = raster::connected_components(m, eight ? Connectivity::kEight : Connectivity::kFour);
      const auto oracle_labels = oracle::flood_fill(m, eight);
      ASSERT_TRUE(oracle::same_partition(cs.labels, oracle_labels));
      ASSERT_EQ(static_cast<int>(cs.components.size()), oracle::label_count(oracle_labels));
      std::size_t total = 0;
      for (std::size_t k = 0; k < cs.components.size(); ++k) {
        EXPECT_EQ(cs.components[k].label, static_cast<int>(k) + 1);
        total += cs.components[k].size();
      }
      EXPECT_EQ(total, raster::count_set(m));
    }
  }
}

TEST(Components, FilterKeepsSizeRange) {
  BinaryMask m(60, 60, 0);
  m(1, 1) = m(2, 1) = m(3, 1) = 1;                           // 3 px
  for (int y = 10; y < 14; ++y)
    for (int x = 10; x < 20; ++x) m(x, y) = 1;               // 40 px
  for (int y = 25; y < 55; ++y)
    for (int x = 25; x < 55; ++x) m(x, y) = 1;               // 900 px
  const auto cs = raster::connected_components(m, Connectivity::kEight);
  const auto f = raster::filter_components(cs, 10, 100);
  ASSERT_EQ(f.components.size(), 1u);
  EXPECT_EQ(f.components[0].size(), 40u);
  EXPECT_EQ(f.components[0].label, 1);
  EXPECT_EQ(f.labels(12, 11), 1);
  EXPECT_EQ(f.labels(30, 30), 0);

  const auto all = raster::filter_components(cs, 0, std::numeric_limits<std::size_t>::max());
  EXPECT_TRUE(oracle::same_partition(all.labels, cs.labels));
}

TEST(Components, FilterMatchesPredicateOracle) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 30; ++trial) {
    BinaryMask m(40, 40, 0);
    for (auto& v : m.data()) v = coin(rng) ? 1 : 0;
    const auto cs = raster::connected_components(m, Connectivity::kEight);
    const auto f = raster::filter_components(cs, 3, 20);
    std::vector<std::vector<Pixel>> expected;
    for (const auto& c : cs.components)
      if (c.size() >= 3 && c.size() <= 20) expected.push_back(c.pixels);
    ASSERT_EQ(f.components.size(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(f.components[k].pixels, expected[k]);
  }
}

TEST(Skeleton, ThinLineUnchanged) {
  BinaryMask m(30, 5, 0);
  for (int x = 3; x < 27; ++x) m(x, 2) = 1;
  EXPECT_EQ(raster::skeletonize(m), m);
}

TEST(Skeleton, BarCollapsesToMiddleRow) {
  const auto m = rect(60, 20, 5, 8, 54, 12);  // 50 x 5, middle row 10
  const auto s = raster::skeletonize(m);
  EXPECT_TRUE(raster::is_thin(s));
  EXPECT_EQ(raster::connected_components(s, Connectivity::kEight).components.size(), 1u);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 60; ++x)
      if (s(x, y)) EXPECT_LE(std::abs(y - 10), 1) << x << "," << y;
}

TEST(Skeleton, DiskCollapsesNearCentre) {
  BinaryMask m(31, 31, 0);
  for (int y = 0; y < 31; ++y)
    for (int x = 0; x < 31; ++x)
      if ((x - 15) * (x - 15) + (y - 15) * (y - 15) <= 100) m(x, y) = 1;
  const auto s = raster::skeletonize(m);
  const auto cs = raster::connected_components(s, Connectivity::kEight);
  ASSERT_EQ(cs.components.size(), 1u);
  EXPECT_LE(cs.components[0].bbox.width(), 5);
  EXPECT_LE(cs.components[0].bbox.height(), 5);
  for (const Pixel& p : cs.components[0].pixels) {
    EXPECT_LE(std::abs(p.x - 15), 2);
    EXPECT_LE(std::abs(p.y - 15), 2);
  }
}

TEST(Skeleton, RandomBlobProperties) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = oracle::random_blobs(rng, 80, 80, 4);
    const auto s = raster::skeletonize(m);
    EXPECT_TRUE(raster::is_thin(s));
    const auto in = oracle::flood_fill(m, true);
    const auto out = oracle::flood_fill(s, true);
    std::map<int, std::set<int>> per_input;
    for (std::size_t i = 0; i < m.data().size(); ++i) {
      ASSERT_TRUE(!s.data()[i] || m.data()[i]);
      if (s.data()[i]) per_input[in.data()[i]].insert(out.data()[i]);
    }
    EXPECT_EQ(static_cast<int>(per_input.size()), oracle::label_count(in));
    for (const auto& [label, outs] : per_input) EXPECT_EQ(outs.size(), 1u);
  }
}

TEST(Contours, SquareHasThirtySixBoundaryPixels) {
  const auto m = rect(20, 20, 5, 5, 14, 14);
  const auto cs = raster::trace_contours(m);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_FALSE(cs[0].is_hole);
  std::set<Pixel> traced(cs[0].pixels.begin(), cs[0].pixels.end());
  const auto expected = oracle::boundary_pixels(m);
  EXPECT_EQ(cs[0].pixels.size(), 36u);
  EXPECT_EQ(traced, std::set<Pixel>(expected.begin(), expected.end()));
}

TEST(Contours, HoleAndWinding) {
  auto m = rect(20, 20, 2, 2, 15, 15);
  for (int y = 7; y < 11; ++y)
    for (int x = 7; x < 11; ++x) m(x, y) = 0;
  const auto cs = raster::trace_contours(m);
  ASSERT_EQ(cs.size(), 2u);
  int holes = 0;
  for (const auto& c : cs) {
    holes += c.is_hole ? 1 : 0;
    // North-up frame: flip y before taking the signed area.
    std::vector<Point2> ring;
    for (const Pixel& p : c.pixels) ring.push_back({double(p.x), -double(p.y)});
    if (c.is_hole) EXPECT_LT(geometry::signed_area(ring), 0.0);
    else EXPECT_GT(geometry::signed_area(ring), 0.0);
  }
  EXPECT_EQ(holes, 1);
  EXPECT_TRUE(raster::trace_contours(BinaryMask(5, 5, 0)).empty());
}

TEST(Contours, RandomBlobPointsAreBoundaryAndAreaIsConsistent) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = oracle::random_blobs(rng, 70, 70, 3);
    const auto bp = oracle::boundary_pixels(m);
    const std::set<Pixel> boundary(bp.begin(), bp.end());
    const auto cs = raster::connected_components(m, Connectivity::kEight);
    for (const auto& c : raster::trace_contours(m)) {
      for (const Pixel& p : c.pixels) ASSERT_TRUE(boundary.count(p)) << p.x << "," << p.y;
      if (c.is_hole || c.pixels.size() < 3) continue;
      std::vector<Point2> ring;
      for (const Pixel& p : c.pixels) ring.push_back({double(p.x), -double(p.y)});
      const double area = geometry::signed_area(ring);
      const double count = double(cs.components[c.component - 1].size());
      EXPECT_LE(std::abs(area - count), double(c.pixels.size()) + 1.0);
    }
  }
}

TEST(NeighborCount, LineEndpointAndJunction) {
  BinaryMask m(11, 11, 0);
  for (int x = 0; x < 11; ++x) m(x, 5) = 1;
  EXPECT_EQ(raster::neighbor_count(m, {5, 5}), 2);
  EXPECT_EQ(raster::neighbor_count(m, {0, 5}), 1);
  // Three strokes meeting at (5,5).
  BinaryMask y3(11, 11, 0);
  for (int k = 1; k < 5; ++k) {
    y3(5 - k, 5 - k) = 1;
    y3(5 + k, 5 - k) = 1;
    y3(5, 5 + k) = 1;
  }
  y3(5, 5) = 1;
  EXPECT_EQ(raster::neighbor_count(y3, {5, 5}), 3);
  EXPECT_THROW(raster::neighbor_count(m, {11, 0}), InvalidArgument);
}

TEST(MajorityFilter, RemovesSpecksKeepsEdges) {
  auto m = rect(30, 30, 0, 0, 29, 14);
  m(10, 15) = 1;  // bump
  m(20, 14) = 0;  // dent
  m(5, 25) = 1;   // speck
  const auto f = raster::majority_filter(m);
  EXPECT_EQ(f(10, 15), 0);
  EXPECT_EQ(f(20, 14), 1);
  EXPECT_EQ(f(5, 25), 0);
  for (int x = 1; x < 29; ++x) {
    EXPECT_EQ(f(x, 14), 1);
    EXPECT_EQ(f(x, 15), 0);
  }
}
