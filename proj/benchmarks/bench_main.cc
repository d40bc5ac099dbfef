#include <benchmark/benchmark.h>

#include <random>

#include "panosplat/features.h"
#include "panosplat/pipeline.h"
#include "panosplat/renderer.h"
#include "panosplat/sweep.h"
#include "panosplat/synth.h"

namespace {

using namespace panosplat;

SplatSet random_splats(int n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> xy(-1.5, 1.5), z(0.5, 6.0), sc(0.01, 0.2), u(0.0, 1.0);
  SplatSet set;
  for (int i = 0; i < n; ++i) {
    Splat s;
    s.center = Vec3(xy(rng), xy(rng), z(rng));
    s.scale = Vec3(sc(rng), sc(rng), sc(rng));
    s.opacity = u(rng);
    s.color = Vec3(u(rng), u(rng), u(rng));
    set.push_back(s);
  }
  return set;
}

PinholeCamera camera(int size) {
  PinholeCamera cam;
  cam.fx = cam.fy = 0.5 * size;
  cam.cx = cam.cy = 0.5 * size;
  cam.width = cam.height = size;
  return cam;
}

void BM_Rasterize(benchmark::State& state) {
  const SplatSet set = random_splats(static_cast<int>(state.range(0)));
  const PinholeCamera cam = camera(256);
  for (auto _ : state) benchmark::DoNotOptimize(rasterize(set, cam, Vec3::Zero()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Rasterize)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_RasterizeReference(benchmark::State& state) {
  const SplatSet set = random_splats(1000);
  const PinholeCamera cam = camera(64);
  for (auto _ : state) benchmark::DoNotOptimize(rasterize_reference(set, cam, Vec3::Zero()));
}
BENCHMARK(BM_RasterizeReference)->Unit(benchmark::kMillisecond);

void BM_CostVolume(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const ErpGrid g(width, width / 2);
  const TestPair pair = make_test_pair(make_scene("room"), 0.5, 0, g);
  const FeatureOptions fo{.downsample = kDefaultMatchingDownsample};
  const FeatureMap ref = extract_features(pair.views[0].image, fo);
  const std::vector<FeatureMap> src{extract_features(pair.views[1].image, fo)};
  const std::vector<Pose> ps{pair.poses[1]};
  const DepthCandidates cands = make_candidates();
  for (auto _ : state) benchmark::DoNotOptimize(build_cost_volume(ref, src, pair.poses[0], ps, cands));
}
BENCHMARK(BM_CostVolume)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Features(benchmark::State& state) {
  const ErpGrid g(512, 256);
  const ErpImage img = render_gt(make_scene("room"), Pose(), g).image;
  const FeatureOptions fo{.downsample = kDefaultMatchingDownsample, .use_cubemap = state.range(0) != 0};
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(img, fo));
}
BENCHMARK(BM_Features)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CubemapRoundTrip(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const ErpGrid g(width, width / 2);
  const ErpImage img = render_gt(make_scene("room"), Pose(), g).image;
  for (auto _ : state) benchmark::DoNotOptimize(cubemap_to_erp(erp_to_cubemap(img, width / 4), g));
}
BENCHMARK(BM_CubemapRoundTrip)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_RenderPanorama(benchmark::State& state) {
  const ErpGrid g(512, 256);
  const GroundTruthView v = render_gt(make_scene("room"), Pose(), g);
  const SplatSet s = decode_splats(v.image, {v.depth, ErpImage(g, 1, 1.0f)}, Pose());
  for (auto _ : state) benchmark::DoNotOptimize(render_panorama(s, Pose(), g, Vec3::Zero()));
}
BENCHMARK(BM_RenderPanorama)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const ErpGrid g(512, 256);
  const TestPair pair = make_test_pair(make_scene("room"), 0.5, 0, g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        reconstruct({pair.views[0].image, pair.views[1].image}, {pair.poses[0], pair.poses[1]}, {}));
  }
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
