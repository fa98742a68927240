#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hdmap/config.hpp"
#include "hdmap/image_io.hpp"
#include "hdmap/lanelet2_io.hpp"
#include "hdmap/keyvalue.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const fs::path capture = fs::path(::testing::TempDir()) / "hdmap_cli_stdout.txt";
  const std::string cmd = std::string(HDMAP_CLI_PATH) + " " + args + " > " + capture.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = hdmap::read_text_file(capture.string());
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("hdmap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, PrintConfigMatchesDefaults) {
  const CliResult r = run("print-config");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, hdmap::config::format_config(hdmap::PipelineConfig{}));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("map --mask x.png").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST_F(Cli, SynthMapEvalOverlay) {
  write("scene.txt", "kind=straight\nlanes=2\narrows=1\n");
  ASSERT_EQ(run("synth --scene " + path("scene.txt") + " --out " + path("a") + " --seed 3").code, 0);
  ASSERT_EQ(run("synth --scene " + path("scene.txt") + " --out " + path("b") + " --seed 3").code, 0);
  for (const char* f : {"mask.png", "georef.txt", "reference.osm"})
    EXPECT_EQ(hdmap::read_text_file(path(std::string("a/") + f)), hdmap::read_text_file(path(std::string("b/") + f)))
        << f;

  const std::string map_args = "map --mask " + path("a/mask.png") + " --georef " + path("a/georef.txt");
  ASSERT_EQ(run(map_args + " --out " + path("gen1.osm")).code, 0);
  ASSERT_EQ(run(map_args + " --out " + path("gen2.osm")).code, 0);
  EXPECT_EQ(hdmap::read_text_file(path("gen1.osm")), hdmap::read_text_file(path("gen2.osm")));
  const auto summary = nlohmann::json::parse(hdmap::read_text_file(path("gen1.osm.summary.json")));
  EXPECT_EQ(summary.at("lanelets").get<int>(), 2);
  EXPECT_EQ(summary.at("dashed_markings").get<int>(), 1);

  CliResult e = run("eval --map " + path("gen1.osm") + " --reference " + path("a/reference.osm"));
  ASSERT_EQ(e.code, 0);
  auto j = nlohmann::json::parse(e.out);
  EXPECT_GE(j.at("precision").get<double>(), 0.95);
  EXPECT_GE(j.at("recall").get<double>(), 0.95);

  e = run("eval --map " + path("a/reference.osm") + " --reference " + path("a/reference.osm"));
  j = nlohmann::json::parse(e.out);
  EXPECT_EQ(j.at("precision").get<double>(), 1.0);
  EXPECT_EQ(j.at("recall").get<double>(), 1.0);

  EXPECT_EQ(run("overlay --mask " + path("a/mask.png") + " --map " + path("gen1.osm") + " --georef " +
                path("a/georef.txt") + " --out " + path("overlay.png"))
                .code,
            0);
  EXPECT_TRUE(fs::exists(path("overlay.png")));
}

TEST_F(Cli, CorruptInputsLeaveNoOutput) {
  write("georef.txt", "zone=32\nhemisphere=N\norigin_easting=300000\norigin_northing=5600000\ngsd=0.05\n");
  write("mask.png", "not a png");
  EXPECT_EQ(run("map --mask " + path("mask.png") + " --georef " + path("georef.txt") + " --out " + path("o.osm")).code, 2);
  EXPECT_FALSE(fs::exists(path("o.osm")));
  EXPECT_FALSE(fs::exists(path("o.osm.summary.json")));

  write("broken.osm", "<osm version=\"0.6\">\n<way id=\"1\">\n");
  EXPECT_EQ(run("eval --map " + path("broken.osm") + " --reference " + path("broken.osm")).code, 2);

  write("bad_scene.txt", "kind=motorway\n");
  EXPECT_EQ(run("synth --scene " + path("bad_scene.txt") + " --out " + path("s")).code, 2);

  write("bad.cfg", "lane.width_max=-3\n");
  write("scene.txt", "kind=straight\n");
  ASSERT_EQ(run("synth --scene " + path("scene.txt") + " --out " + path("t")).code, 0);
  EXPECT_EQ(run("map --mask " + path("t/mask.png") + " --georef " + path("t/georef.txt") + " --config " +
                path("bad.cfg") + " --out " + path("c.osm"))
                .code,
            2);
  EXPECT_FALSE(fs::exists(path("c.osm")));
}

TEST_F(Cli, EmptyMaskGivesEmptyMap) {
  write("georef.txt", "zone=32\nhemisphere=N\norigin_easting=300000\norigin_northing=5600000\ngsd=0.05\n");
  hdmap::write_file_atomic(path("blank.png"), hdmap::image_io::encode_gray_png(hdmap::Raster<std::uint8_t>(300, 200, 0)));
  ASSERT_EQ(run("map --mask " + path("blank.png") + " --georef " + path("georef.txt") + " --out " + path("e.osm")).code, 0);
  EXPECT_EQ(hdmap::read_text_file(path("e.osm")), hdmap::export_osm(hdmap::HdMap{}));
}
