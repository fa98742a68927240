#include <gtest/gtest.h>

#include "hdmap/config.hpp"
#include "hdmap/keyvalue.hpp"
#include "hdmap/synth.hpp"

using namespace hdmap;

TEST(Config, DefaultsRoundTrip) {
  const PipelineConfig defaults;
  const std::string text = config::format_config(defaults);
  const PipelineConfig back = config::parse_config(text);
  EXPECT_EQ(back, defaults);
  EXPECT_EQ(config::format_config(back), text);
  EXPECT_NE(text.find("border.max_turn=45\n"), std::string::npos);
  EXPECT_NE(text.find("eval.match_gate=0.2\n"), std::string::npos);
}

TEST(Config, PartialOverridesKeepDefaults) {
  const auto cfg = config::parse_config("# tuned\nlane.width_max = 5.5\nborder.probe_dist=0.75\n");
  EXPECT_EQ(cfg.lanes.width_max, 5.5);
  EXPECT_EQ(cfg.border.probe_dist, 0.75);
  EXPECT_EQ(cfg.lanes.width_min, PipelineConfig{}.lanes.width_min);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config::parse_config("lane.widht_max=5\n"), InputError);
  EXPECT_THROW(config::parse_config("lane.width_max=abc\n"), InputError);
  EXPECT_THROW(config::parse_config("border.probe_dist=-1\n"), InputError);
  EXPECT_THROW(config::parse_config("eval.resample_step=0.3\n"), InputError);
  EXPECT_THROW(config::parse_config("lane.width_min=7\n"), InputError);
  EXPECT_THROW(config::parse_config("border.max_turn=180\n"), InputError);
  EXPECT_THROW(config::parse_config("a=1\na=2\n"), InputError);
  EXPECT_THROW(config::parse_config("novalue\n"), InputError);
}

TEST(KeyValue, NumberFormatting) {
  for (double v : {0.1, 1.0 / 3.0, 45.0, 1e-7, 123456.789}) EXPECT_EQ(parse_double("k", format_double(v)), v);
  EXPECT_EQ(format_fixed(1.5, 3), "1.500");
  EXPECT_THROW(parse_int("k", "3.5"), InputError);
}

TEST(SceneSpec, RoundTripAndValidation) {
  SceneSpec spec;
  spec.kind = SceneKind::kRoundabout;
  spec.lanes = 1;
  spec.seed = 42;
  spec.heading_deg = 30.0;
  const auto back = synth::parse_scene_spec(synth::format_scene_spec(spec));
  EXPECT_EQ(synth::format_scene_spec(back), synth::format_scene_spec(spec));
  EXPECT_EQ(synth::parse_scene_spec("kind=roundabout-lite\n").kind, SceneKind::kRoundabout);
  EXPECT_THROW(synth::parse_scene_spec("kind=motorway\n"), InputError);
  EXPECT_THROW(synth::parse_scene_spec("lanes=0\n"), InputError);
}
