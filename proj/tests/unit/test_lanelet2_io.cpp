#include <gtest/gtest.h>

#include <random>

#include "hdmap/lanelet2_io.hpp"
#include "hdmap/synth.hpp"
#include "random_map.hpp"

using namespace hdmap;

namespace {

std::size_t line_of(const std::string& xml, const std::string& needle) {
  const auto pos = xml.find(needle);
  return 1 + std::count(xml.begin(), xml.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
}

}  // namespace

TEST(ExportOsm, EmptyMap) {
  EXPECT_EQ(export_osm(HdMap{}),
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<osm version=\"0.6\" generator=\"hdmap\">\n</osm>\n");
}

TEST(ExportOsm, SolidLinestring) {
  HdMap m;
  const auto a = m.add_point(50.0, 6.0, 294000.0, 5628000.0);
  const auto b = m.add_point(50.0, 6.001, 294071.0, 5628000.0);
  m.add_linestring({a, b}, {{"type", "line_thin"}, {"subtype", "solid"}});
  const auto xml = export_osm(m);
  EXPECT_NE(xml.find("<node id=\"1\" lat=\"50.000000000\" lon=\"6.000000000\">"), std::string::npos);
  EXPECT_NE(xml.find("<tag k=\"local_x\" v=\"294000.000000000\"/>"), std::string::npos);
  EXPECT_NE(xml.find("<tag k=\"subtype\" v=\"solid\"/>"), std::string::npos);
  EXPECT_NE(xml.find("<tag k=\"type\" v=\"line_thin\"/>"), std::string::npos);
  EXPECT_EQ(std::count(xml.begin(), xml.end(), '\r'), 0);
}

TEST(ExportOsm, DanglingReferenceIsIntegrityError) {
  HdMap m;
  const auto a = m.add_point(50.0, 6.0, 0.0, 0.0);
  m.linestrings[10] = LineString{{a, 99}, {}};
  EXPECT_THROW(export_osm(m), IntegrityError);
  HdMap short_way;
  short_way.linestrings[5] = LineString{{}, {}};
  EXPECT_THROW(short_way.validate(), IntegrityError);
}

TEST(RoundTrip, RandomMaps) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    const HdMap m = testing_support::random_map(rng);
    const std::string xml = export_osm(m);
    const HdMap back = parse_osm(xml);
    EXPECT_EQ(back, m);
    EXPECT_EQ(export_osm(back), xml);
  }
}

TEST(RoundTrip, SyntheticScene) {
  SceneSpec spec;
  spec.seed = 2;
  const auto scene = synth::generate(spec);
  EXPECT_EQ(parse_osm(export_osm(scene.reference)), scene.reference);
}

TEST(ParseOsm, ExtraTagsSurviveReexport) {
  HdMap m;
  const auto a = m.add_point(50.0, 6.0, 1.0, 2.0);
  const auto b = m.add_point(50.0, 6.1, 3.0, 4.0);
  m.add_linestring({a, b}, {{"type", "road_border"}});
  std::string xml = export_osm(m);
  const std::string marker = "<tag k=\"type\" v=\"road_border\"/>";
  xml.insert(xml.find(marker), "<tag k=\"note\" v=\"checked by editor\"/>\n    ");
  const HdMap edited = parse_osm(xml);
  EXPECT_EQ(edited.linestrings.begin()->second.tags.at("note"), "checked by editor");
  EXPECT_NE(export_osm(edited).find("<tag k=\"note\" v=\"checked by editor\"/>"), std::string::npos);
}

TEST(ParseOsm, ErrorsCarryLineNumbers) {
  HdMap m;
  const auto a = m.add_point(50.0, 6.0, 1.0, 2.0);
  const auto b = m.add_point(50.0, 6.1, 3.0, 4.0);
  m.add_linestring({a, b}, {{"type", "road_border"}});
  const std::string good = export_osm(m);

  std::string missing = good;
  missing.replace(missing.find("<nd ref=\"2\"/>"), 13, "<nd ref=\"77\"/>");
  try {
    parse_osm(missing);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line_of(missing, "<way id=\"3\">"));
    EXPECT_NE(std::string(e.what()).find("77"), std::string::npos);
  }

  std::string dup = good;
  dup.replace(dup.find("<way id=\"3\">"), 12, "<way id=\"2\">");
  EXPECT_THROW(parse_osm(dup), ParseError);

  const std::string broken = good.substr(0, good.size() - 8);
  EXPECT_THROW(parse_osm(broken), ParseError);
  EXPECT_THROW(parse_osm("<osm version=\"0.6\">\n<node id=\"1\" lat=\"x\" lon=\"2\"/>\n</osm>\n"), ParseError);
}

TEST(HdMapType, CoordinatesAreQuantized) {
  HdMap m;
  const auto id = m.add_point(50.1234567891234, 6.0, 294000.1234567891, 1.0);
  EXPECT_EQ(m.points.at(id).lat, quantize_coordinate(50.1234567891234));
  EXPECT_EQ(m.points.at(id).x, quantize_coordinate(294000.1234567891));
}
