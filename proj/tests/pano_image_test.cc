#include "panosplat/pano_image.h"

#include <gtest/gtest.h>

#include <random>

#include "panosplat/metrics.h"
#include "support/helpers.h"

namespace panosplat {
namespace {

TEST(ErpImage, ValidatesContents) {
  const ErpGrid g(8, 4);
  EXPECT_THROW(ErpImage(g, 3, std::vector<float>(10)), std::invalid_argument);
  std::vector<float> bad(8 * 4, 0.0f);
  bad[5] = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(ErpImage(g, 1, bad), std::invalid_argument);
  EXPECT_THROW(ErpImage(g, 0), std::invalid_argument);
}

TEST(DepthMap, NonFiniteBecomesInvalid) {
  const ErpGrid g(8, 4);
  std::vector<float> v(32, 2.0f);
  v[0] = -1.0f;
  v[1] = std::numeric_limits<float>::infinity();
  const DepthMap d(g, v);
  EXPECT_EQ(d.data[0], 0.0f);
  EXPECT_EQ(d.data[1], 0.0f);
  EXPECT_EQ(d.valid_count(), 30u);
}

TEST(SampleBilinear, PixelCenterReturnsPixel) {
  std::mt19937_64 rng(1);
  const ErpImage img = testing_support::random_image(ErpGrid(16, 8), 3, rng);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 16; ++x) {
      const auto s = sample_bilinear(img, x + 0.5, y + 0.5);
      for (int k = 0; k < 3; ++k) EXPECT_FLOAT_EQ(static_cast<float>(s[k]), img.at(x, y, k));
    }
  }
}

TEST(SampleBilinear, ConstantEverywhereIncludingSeam) {
  const ErpImage img(ErpGrid(16, 8), 2, 0.25f);
  for (double u : {-3.0, 0.0, 0.1, 15.9, 16.0, 31.7}) {
    for (double v : {0.0, 0.2, 4.0, 8.0}) {
      const auto s = sample_bilinear(img, u, v);
      EXPECT_NEAR(s[0], 0.25, 1e-7);
      EXPECT_NEAR(s[1], 0.25, 1e-7);
    }
  }
}

TEST(SampleBilinear, SeamBlendsLastAndFirstColumn) {
  ErpImage img(ErpGrid(16, 8), 1, 0.0f);
  for (int y = 0; y < 8; ++y) {
    img.at(15, y, 0) = 0.2f;
    img.at(0, y, 0) = 1.0f;
  }
  for (double delta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto s = sample_bilinear(img, 16 - 0.5 + delta, 3.5);
    EXPECT_NEAR(s[0], (1 - delta) * 0.2 + delta * 1.0, 1e-7);
  }
}

TEST(SampleBilinear, SeamContinuity) {
  const ErpImage img = testing_support::smooth_image(ErpGrid(64, 32));
  double prev = 1e9;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto a = sample_bilinear(img, 64 - eps, 10.3);
    const auto b = sample_bilinear(img, eps, 10.3);
    double diff = 0.0;
    for (int k = 0; k < 3; ++k) diff = std::max(diff, std::abs(a[k] - b[k]));
    EXPECT_LE(diff, prev);
    prev = diff;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(CubeMap, FaceDirectionsAndDominantAxis) {
  const std::array<Vec3, kCubeFaceCount> axes = {Vec3(0, 0, 1),  Vec3(1, 0, 0),  Vec3(0, 0, -1),
                                                 Vec3(-1, 0, 0), Vec3(0, 1, 0),  Vec3(0, -1, 0)};
  for (int f = 0; f < kCubeFaceCount; ++f) {
    const auto face = static_cast<CubeFace>(f);
    EXPECT_TRUE(Pose::is_rigid(face_rotation(face)));
    EXPECT_LT((face_direction(face, 0, 0) - axes[f]).norm(), 1e-15);
    const FaceHit hit = direction_to_face(axes[f]);
    EXPECT_EQ(hit.face, face);
    EXPECT_NEAR(hit.a, 0.0, 1e-15);
    EXPECT_NEAR(hit.b, 0.0, 1e-15);
    const FaceHit off = direction_to_face(face_direction(face, 0.4, -0.7));
    EXPECT_EQ(off.face, face);
    EXPECT_NEAR(off.a, 0.4, 1e-12);
    EXPECT_NEAR(off.b, -0.7, 1e-12);
  }
}

TEST(CubeMap, ConstantRoundTrip) {
  const ErpImage img(ErpGrid(64, 32), 3, 0.7f);
  const CubeMap cm = erp_to_cubemap(img, 16);
  for (const Raster& f : cm.faces) {
    for (float v : f.data) EXPECT_NEAR(v, 0.7f, 1e-6);
  }
  const ErpImage back = cubemap_to_erp(CubeMap(8, 3, 0.3f), ErpGrid(32, 16));
  for (float v : back.data()) EXPECT_NEAR(v, 0.3f, 1e-6);
}

TEST(CubeMap, FrontCenterMatchesForwardDirection) {
  const ErpGrid g(128, 64);
  const ErpImage img = testing_support::smooth_image(g);
  const CubeMap cm = erp_to_cubemap(img, 32);
  std::vector<double> expect(3), got(3);
  sample_bilinear(img, 64.0, 32.0, expect);
  sample_raster(cm.face(CubeFace::kFront), 16.0, 16.0, got);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], expect[k], 2e-3);

  CubeMap marked(8, 1, 0.0f);
  for (int y = 3; y <= 4; ++y) {
    for (int x = 3; x <= 4; ++x) marked.face(CubeFace::kFront).at(x, y, 0) = 1.0f;
  }
  const ErpImage stitched = cubemap_to_erp(marked, ErpGrid(64, 32));
  EXPECT_NEAR(sample_bilinear(stitched, 32.0, 16.0)[0], 1.0, 1e-6);
}

TEST(CubeMap, LatitudeGradientIsRadiallySymmetricOnUpFace) {
  const ErpGrid g(256, 128);
  ErpImage img(g, 1);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) img.at(x, y, 0) = static_cast<float>((y + 0.5) / g.height());
  }
  const int n = 32;
  const Raster up = erp_to_face(img, CubeFace::kUp, n);
  for (auto [i, j] : {std::pair{3, 9}, std::pair{7, 12}}) {
    const float ref = up.at(i, j, 0);
    const int k = n - 1 - i, l = n - 1 - j;
    for (auto [x, y] : {std::pair{k, j}, std::pair{i, l}, std::pair{k, l}, std::pair{j, i},
                        std::pair{l, i}, std::pair{j, k}, std::pair{l, k}}) {
      EXPECT_NEAR(up.at(x, y, 0), ref, 1e-5) << x << "," << y;
    }
  }
}

TEST(CubeMap, StitchPsnrAt256) {
  const ErpImage img = testing_support::smooth_image(ErpGrid(512, 256));
  const ErpImage back = cubemap_to_erp(erp_to_cubemap(img, 256), img.grid());
  EXPECT_GE(psnr(img, back), 40.0);
}

TEST(CubeMap, StitchIsNearlyIdempotent) {
  const ErpGrid g(512, 256);
  const ErpImage img = testing_support::smooth_image(g);
  const ErpImage once = cubemap_to_erp(erp_to_cubemap(img, 256), g);
  const ErpImage twice = cubemap_to_erp(erp_to_cubemap(once, 256), g);
  double worst_step = 0.0, mean_step = 0.0, worst_first = 0.0;
  for (std::size_t i = 0; i < once.data().size(); ++i) {
    const double step = std::abs(twice.data()[i] - once.data()[i]);
    worst_step = std::max(worst_step, step);
    mean_step += step;
    worst_first = std::max(worst_first, static_cast<double>(std::abs(once.data()[i] - img.data()[i])));
  }
  mean_step /= static_cast<double>(once.data().size());
  // Bilinear resampling keeps smoothing on each pass, so the fixpoint is only
  // approximate (measured: worst 4.9e-4, mean 6.4e-6).
  EXPECT_LT(worst_step, 1e-3);
  EXPECT_LT(mean_step, 1e-5);
  EXPECT_LE(worst_step, worst_first);
}

TEST(BoxDownsample, AveragesBlocks) {
  ErpImage img(ErpGrid(8, 4), 1);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 8; ++x) img.at(x, y, 0) = static_cast<float>(x + 10 * y);
  }
  const ErpImage s = box_downsample(img, 2);
  EXPECT_EQ(s.width(), 4);
  EXPECT_FLOAT_EQ(s.at(0, 0, 0), (0 + 1 + 10 + 11) / 4.0f);
  EXPECT_FLOAT_EQ(s.at(3, 1, 0), (26 + 27 + 36 + 37) / 4.0f);
  EXPECT_THROW(box_downsample(img, 3), std::invalid_argument);
}

TEST(Resample, SameGridIsIdentityAndConstantStaysConstant) {
  std::mt19937_64 rng(5);
  const ErpImage img = testing_support::random_image(ErpGrid(16, 8), 2, rng);
  EXPECT_EQ(resample(img, img.grid()).data(), img.data());
  const ErpImage c(ErpGrid(16, 8), 1, 0.4f);
  const ErpImage up = resample(c, ErpGrid(64, 32));
  for (float v : up.data()) EXPECT_NEAR(v, 0.4f, 1e-6);
}

}  // namespace
}  // namespace panosplat
