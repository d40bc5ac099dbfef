#include "panosplat/dataset_io.h"

#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <random>

#include "panosplat/image_io.h"
#include "support/helpers.h"

namespace panosplat {
namespace {

using testing_support::TempDir;

std::string identity_c2w() { return "[1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]"; }

void expect_error_contains(const std::function<void()>& fn, const std::string& needle) {
  try {
    fn();
    FAIL() << "no exception";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(Manifest, ParsesAndRoundTrips) {
  const std::string text = R"({"near": 0.2, "far": 8, "frames": [
    {"image": "a.png", "c2w": )" + identity_c2w() + R"(},
    {"image": "b.png", "depth": "b.sdpt", "c2w": [1,0,0,1, 0,1,0,2, 0,0,1,3, 0,0,0,1]}]})";
  const SceneManifest m = parse_manifest(text);
  EXPECT_EQ(m.near, 0.2);
  EXPECT_EQ(m.far, 8.0);
  ASSERT_EQ(m.frames.size(), 2u);
  EXPECT_FALSE(m.frames[0].depth.has_value());
  EXPECT_EQ(*m.frames[1].depth, "b.sdpt");
  EXPECT_EQ(m.frames[1].c2w.translation(), Vec3(1, 2, 3));
  const SceneManifest again = parse_manifest(manifest_to_json(m));
  EXPECT_EQ(manifest_to_json(again), manifest_to_json(m));
}

TEST(Manifest, RejectsBadContent) {
  expect_error_contains([] { parse_manifest("{"); }, "scene.json");
  expect_error_contains([] { parse_manifest(R"({"near": 1, "far": 0.5, "frames": []})"); }, "near < far");
  expect_error_contains([] { parse_manifest(R"({"near": 0.1, "far": 5, "frames": []})"); }, "non-empty");
  expect_error_contains(
      [] {
        parse_manifest(R"({"near": 0.1, "far": 5, "frames": [{"image": "a.png", "c2w": )" + identity_c2w() +
                       R"(}, {"image": "b.png", "c2w": [2,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1]}]})");
      },
      "frames[1]");
  expect_error_contains(
      [] { parse_manifest(R"({"near": 0.1, "far": 5, "frames": [{"image": "a.png", "c2w": [1,0,0]}]})"); },
      "16 numbers");
  expect_error_contains([] { parse_manifest(R"({"near": 0.1, "far": 5, "frames": [{"c2w": []}]})"); },
                        "frames[0]");
}

TEST(SceneDir, WriteThenLoad) {
  TempDir dir("scene");
  std::mt19937_64 rng(11);
  const ErpGrid g(32, 16);
  std::vector<Pose> poses{Pose(), testing_support::random_pose(rng)};
  std::vector<ErpImage> images{testing_support::random_image(g, 3, rng), testing_support::random_image(g, 3, rng)};
  std::vector<std::optional<DepthMap>> depths{DepthMap(g, 2.5f), std::nullopt};
  write_scene(dir.path(), 0.1, 10.0, poses, images, depths);
  const Scene s = load_scene(dir.path());
  ASSERT_EQ(s.frame_count(), 2);
  EXPECT_LT((s.pose(1).rotation() - poses[1].rotation()).norm(), 1e-12);
  EXPECT_LT((s.pose(1).translation() - poses[1].translation()).norm(), 1e-12);
  const ErpImage back = s.load_image(0);
  for (std::size_t i = 0; i < back.data().size(); ++i) {
    EXPECT_NEAR(back.data()[i], images[0].data()[i], 0.5 / 255.0 + 1e-6);
  }
  ASSERT_TRUE(s.load_depth(0).has_value());
  EXPECT_EQ(s.load_depth(0)->at(3, 3), 2.5f);
  EXPECT_FALSE(s.load_depth(1).has_value());
  EXPECT_THROW(s.pose(2), std::out_of_range);
  EXPECT_THROW(write_scene(dir.path(), 0.1, 10.0, poses, images, {}), std::invalid_argument);
}

TEST(SceneDir, MissingFilesNameTheEntry) {
  TempDir dir("scene_missing");
  write_scene(dir.path(), 0.1, 10.0, {Pose(), Pose()}, {ErpImage(ErpGrid(8, 4), 3), ErpImage(ErpGrid(8, 4), 3)},
              {std::nullopt, DepthMap(ErpGrid(8, 4), 1.0f)});
  std::filesystem::remove(dir / "frame_0001.sdpt");
  expect_error_contains([&] { load_scene(dir.path()); }, "frames[1]: depth not found");
  std::filesystem::remove(dir / "frame_0000.png");
  expect_error_contains([&] { load_scene(dir.path()); }, "frames[0]: image not found");
  EXPECT_THROW(load_scene(dir / "nowhere"), IoError);
}

TEST(EvalTuples, Examples) {
  EXPECT_TRUE(select_eval_tuples(100, 100).empty());
  EXPECT_TRUE(select_eval_tuples(3, 4, 2).empty());
  const auto one = select_eval_tuples(5, 4, 3, 0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].context_first, 0);
  EXPECT_EQ(one[0].context_second, 4);
  EXPECT_EQ(one[0].targets, (std::vector<int>{1, 2, 3}));
  const auto many = select_eval_tuples(25, 10, 3, 7);
  ASSERT_EQ(many.size(), 2u);
  EXPECT_EQ(many[1].context_first, 10);
  EXPECT_EQ(many[1].context_second, 20);
  for (const EvalTuple& t : many) {
    ASSERT_EQ(t.targets.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_GT(t.targets[k], t.context_first);
      EXPECT_LT(t.targets[k], t.context_second);
      if (k > 0) EXPECT_LT(t.targets[k - 1], t.targets[k]);
    }
  }
  const auto same = select_eval_tuples(25, 10, 3, 7);
  EXPECT_EQ(same[0].targets, many[0].targets);
  EXPECT_THROW(select_eval_tuples(25, 1, 1), std::invalid_argument);
  EXPECT_THROW(select_eval_tuples(25, 4, 4), std::invalid_argument);
}

}  // namespace
}  // namespace panosplat
