// hdmap: semantic mask to Lanelet2 map, evaluation, synthetic scenes, overlays.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hdmap/config.hpp"
#include "hdmap/evaluation.hpp"
#include "hdmap/image_io.hpp"
#include "hdmap/keyvalue.hpp"
#include "hdmap/lanelet2_io.hpp"
#include "hdmap/overlay.hpp"
#include "hdmap/pipeline.hpp"
#include "hdmap/synth.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInput = 2;
constexpr int kInternal = 3;

hdmap::PipelineConfig load_config(const std::string& path) {
  return path.empty() ? hdmap::PipelineConfig{} : hdmap::config::load_config(path);
}

int cmd_map(const std::string& mask_path, const std::string& georef_path,
            const std::string& config_path, const std::string& templates, const std::string& out) {
  const hdmap::PipelineConfig cfg = load_config(config_path);
  const hdmap::GeoReference ref = hdmap::geo::load_georef(georef_path);
  const hdmap::SemanticMask mask = hdmap::image_io::load_mask_png(mask_path);
  const hdmap::TemplateClassifier classifier =
      templates.empty() ? hdmap::TemplateClassifier::builtin(cfg.symbol_score_floor)
                        : hdmap::TemplateClassifier::from_directory(templates, cfg.symbol_score_floor);
  const hdmap::PipelineResult result = hdmap::pipeline::run(mask, ref, cfg, classifier);
  const std::string osm = hdmap::export_osm(result.map);
  hdmap::write_file_atomic(out, osm);
  hdmap::write_file_atomic(out + ".summary.json", hdmap::pipeline::summary_json(result));
  return kOk;
}

int cmd_eval(const std::string& generated, const std::string& reference, const std::string& config_path) {
  const hdmap::PipelineConfig cfg = load_config(config_path);
  const hdmap::HdMap gen = hdmap::load_osm(generated);
  const hdmap::HdMap ref = hdmap::load_osm(reference);
  const auto result = hdmap::evaluation::evaluate_maps(gen, ref, cfg.resample_step, cfg.match_gate);
  std::cout << hdmap::evaluation::to_json(result);
  return kOk;
}

int cmd_synth(const std::string& scene_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
              double perturb) {
  hdmap::SceneSpec spec = hdmap::synth::load_scene_spec(scene_path);
  if (seed) spec.seed = *seed;
  const hdmap::SyntheticScene scene = hdmap::synth::generate(spec);
  const hdmap::SemanticMask mask =
      perturb > 0.0 ? hdmap::synth::perturb(scene.mask, perturb, spec.seed) : scene.mask;
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  hdmap::image_io::save_mask_png((dir / "mask.png").string(), mask);
  hdmap::write_file_atomic((dir / "georef.txt").string(), hdmap::geo::format_georef(scene.georef));
  hdmap::write_file_atomic((dir / "reference.osm").string(), hdmap::export_osm(scene.reference));
  return kOk;
}

int cmd_overlay(const std::string& mask_path, const std::string& map_path, const std::string& georef_path,
                const std::string& out) {
  const hdmap::SemanticMask mask = hdmap::image_io::load_mask_png(mask_path);
  const hdmap::HdMap map = hdmap::load_osm(map_path);
  const hdmap::GeoReference ref = hdmap::geo::load_georef(georef_path);
  const hdmap::overlay::OverlayResult r = hdmap::overlay::render(mask, map, ref);
  if (r.clipped_vertices > 0) {
    std::cerr << "warning: " << r.clipped_vertices << " map vertices lie outside the tile; clipped\n";
  }
  hdmap::image_io::save_rgb_png(out, r.image);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lanelet2 HD map extraction from semantic segmentation masks"};
  app.require_subcommand(1);

  std::string mask, georef, config, out, reference, scene, map_path, templates;
  std::optional<std::uint64_t> seed;
  double perturb = 0.0;

  CLI::App* map = app.add_subcommand("map", "Extract a Lanelet2 map from a class-id mask");
  map->add_option("--mask", mask, "8-bit class-id PNG")->required();
  map->add_option("--georef", georef, "key=value georeference sidecar")->required();
  map->add_option("--config", config, "key=value pipeline configuration");
  map->add_option("--templates", templates, "directory of <class>.png arrow templates");
  map->add_option("--out", out, "output .osm path")->required();

  CLI::App* eval = app.add_subcommand("eval", "Score a generated map against a reference map");
  eval->add_option("--map", map_path, "generated .osm")->required();
  eval->add_option("--reference", reference, "reference .osm")->required();
  eval->add_option("--config", config, "key=value pipeline configuration");

  CLI::App* synth = app.add_subcommand("synth", "Render a synthetic scene with ground truth");
  synth->add_option("--scene", scene, "key=value scene spec")->required();
  synth->add_option("--out", out, "output directory")->required();
  synth->add_option("--seed", seed, "overrides the spec seed");
  synth->add_option("--perturb", perturb, "boundary flip probability")->check(CLI::Range(0.0, 1.0));

  CLI::App* overlay = app.add_subcommand("overlay", "Render a map over its mask");
  overlay->add_option("--mask", mask, "8-bit class-id PNG")->required();
  overlay->add_option("--map", map_path, ".osm map")->required();
  overlay->add_option("--georef", georef, "key=value georeference sidecar")->required();
  overlay->add_option("--out", out, "output PNG")->required();

  app.add_subcommand("print-config", "Print the default configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (map->parsed()) return cmd_map(mask, georef, config, templates, out);
    if (eval->parsed()) return cmd_eval(map_path, reference, config);
    if (synth->parsed()) return cmd_synth(scene, out, seed, perturb);
    if (overlay->parsed()) return cmd_overlay(mask, map_path, georef, out);
    std::cout << hdmap::config::format_config(hdmap::PipelineConfig{});
    return kOk;
  } catch (const hdmap::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const hdmap::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
