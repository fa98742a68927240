#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "hdmap/evaluation.hpp"
#include "hdmap/pipeline.hpp"
#include "hdmap/raster.hpp"
#include "hdmap/synth.hpp"

using namespace hdmap;

namespace {

const SyntheticScene& scene(SceneKind kind) {
  static std::map<SceneKind, SyntheticScene> cache;
  auto it = cache.find(kind);
  if (it == cache.end()) {
    SceneSpec spec;
    spec.kind = kind;
    spec.seed = 1;
    it = cache.emplace(kind, synth::generate(spec)).first;
  }
  return it->second;
}

void BM_Skeletonize(benchmark::State& state) {
  const BinaryMask marks = raster::class_mask(scene(SceneKind::kIntersection).mask, {ClassId::kLaneMarking});
  for (auto _ : state) benchmark::DoNotOptimize(raster::skeletonize(marks));
}
BENCHMARK(BM_Skeletonize)->Unit(benchmark::kMillisecond);

void BM_TraceContours(benchmark::State& state) {
  const BinaryMask road = raster::class_mask(scene(SceneKind::kIntersection).mask, {ClassId::kRoad, ClassId::kLaneMarking,
                                                                          ClassId::kSymbol});
  for (auto _ : state) benchmark::DoNotOptimize(raster::trace_contours(road));
}
BENCHMARK(BM_TraceContours)->Unit(benchmark::kMillisecond);

void BM_OptimalAssignment(benchmark::State& state) {
  // Two noisy copies of a dense point cloud: many overlapping gates.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 50.0), n(-0.05, 0.05);
  std::vector<Point2> g, r;
  for (int i = 0; i < state.range(0); ++i) {
    const Point2 p{u(rng), u(rng) / 10};
    g.push_back(p);
    r.push_back(p + Point2{n(rng), n(rng)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(evaluation::optimal_assignment(g, r));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OptimalAssignment)->RangeMultiplier(4)->Range(256, 16384)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
  const auto& s = scene(static_cast<SceneKind>(state.range(0)));
  const auto clf = TemplateClassifier::builtin();
  for (auto _ : state) benchmark::DoNotOptimize(pipeline::run(s.mask, s.georef, PipelineConfig{}, clf));
}
BENCHMARK(BM_Pipeline)
    ->Arg(static_cast<int>(SceneKind::kStraight))
    ->Arg(static_cast<int>(SceneKind::kIntersection))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
