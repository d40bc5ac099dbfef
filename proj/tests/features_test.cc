#include "panosplat/features.h"

#include <gtest/gtest.h>

#include <random>

#include "panosplat/synth.h"
#include "support/helpers.h"

namespace panosplat {
namespace {

ErpImage room_view(const ErpGrid& g) {
  return render_gt(make_scene("room"), Pose::identity(), g).image;
}

ErpImage rotate_columns(const ErpImage& img, int k) {
  ErpImage out(img.grid(), img.channels());
  const int w = img.width();
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < img.channels(); ++c) out.at((x + k) % w, y, c) = img.at(x, y, c);
    }
  }
  return out;
}

TEST(ErpFeatures, ConstantImageHasZeroGradients) {
  const ErpImage img(ErpGrid(64, 32), 3, 0.6f);
  for (bool center : {false, true}) {
    const FeatureMap f = extract_erp_features(img, 2, false, center);
    EXPECT_EQ(f.grid(), ErpGrid(32, 16));
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 32; ++x) {
        EXPECT_EQ(f.raster.at(x, y, kGradX), 0.0f);
        EXPECT_EQ(f.raster.at(x, y, kGradY), 0.0f);
        EXPECT_EQ(f.raster.at(x, y, kDetail), 0.0f);
        EXPECT_NEAR(f.raster.at(x, y, kLuminance), center ? 0.0 : 0.6, 1e-6);
      }
    }
  }
}

TEST(ErpFeatures, VerticalStepEdge) {
  ErpImage img(ErpGrid(8, 4), 1, 0.0f);
  for (int y = 0; y < 4; ++y) {
    for (int x = 4; x < 8; ++x) img.at(x, y, 0) = 1.0f;
  }
  const FeatureMap f = extract_erp_features(img, 1, false, false);
  // Central differences: the rising edge sits between columns 3 and 4, the
  // falling edge between columns 7 and 0 through the seam.
  const float grad[8] = {-0.5f, 0, 0, 0.5f, 0.5f, 0, 0, -0.5f};
  const float detail[8] = {-1.0f / 3, 0, 0, -1.0f / 3, 1.0f / 3, 0, 0, 1.0f / 3};
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 8; ++x) {
      EXPECT_NEAR(f.raster.at(x, y, kGradX), grad[x], 1e-7) << x;
      EXPECT_NEAR(f.raster.at(x, y, kGradY), 0.0f, 1e-7);
      EXPECT_NEAR(f.raster.at(x, y, kDetail), detail[x], 1e-7) << x;
    }
  }
}

TEST(ErpFeatures, RotationAboutVerticalShiftsColumns) {
  const ErpImage img = room_view(ErpGrid(256, 128));
  for (int ds : {1, 4}) {
    const FeatureMap a = extract_erp_features(img, ds);
    for (int k : {1, 5, 256 / ds / 2}) {
      const FeatureMap b = extract_erp_features(rotate_columns(img, k * ds), ds);
      const int w = a.grid().width();
      for (int y = 0; y < a.grid().height(); ++y) {
        for (int x = 0; x < w; ++x) {
          for (int c = 0; c < kFeatureChannels; ++c) {
            ASSERT_EQ(b.raster.at((x + k) % w, y, c), a.raster.at(x, y, c)) << ds << " " << k;
          }
        }
      }
    }
  }
}

TEST(ErpFeatures, RejectsBadDownsample) {
  const ErpImage img(ErpGrid(48, 24), 3);
  EXPECT_THROW(extract_erp_features(img, 3), std::invalid_argument);
  EXPECT_THROW(extract_erp_features(img, 16), std::invalid_argument);
  EXPECT_THROW(extract_erp_features(ErpImage(ErpGrid(36, 18), 3), 4), std::invalid_argument);
}

TEST(ErpFeatures, NormalizedVectorsAreUnitOrZero) {
  const FeatureMap f = extract_erp_features(room_view(ErpGrid(128, 64)), 2);
  EXPECT_TRUE(f.normalized);
  for (int y = 0; y < f.grid().height(); ++y) {
    for (int x = 0; x < f.grid().width(); ++x) {
      double n = 0.0;
      for (float v : f.raster.pixel(x, y)) n += v * v;
      EXPECT_TRUE(std::abs(std::sqrt(n) - 1.0) < 1e-6 || n == 0.0);
    }
  }
}

TEST(CpFeatures, ConstantImageHasZeroGradients) {
  const ErpImage img(ErpGrid(64, 32), 3, 0.3f);
  const FeatureMap f = extract_cp_features(img, 16, 2, false, false);
  EXPECT_EQ(f.grid(), ErpGrid(32, 16));
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 32; ++x) {
      EXPECT_NEAR(f.raster.at(x, y, kGradX), 0.0f, 1e-6);
      EXPECT_NEAR(f.raster.at(x, y, kGradY), 0.0f, 1e-6);
      EXPECT_NEAR(f.raster.at(x, y, kLuminance), 0.3f, 1e-6);
    }
  }
}

TEST(CpFeatures, MatchesErpAwayFromPolesOnSmoothContent) {
  const ErpGrid g(512, 256);
  const ErpImage img = testing_support::smooth_image(g);
  const FeatureMap erp = extract_erp_features(img, 4, false);
  const FeatureMap cp = extract_cp_features(img, 128, 4, false);
  double worst = 0.0;
  for (int y = 0; y < erp.grid().height(); ++y) {
    if (std::abs(pixel_to_spherical(0.5, y + 0.5, erp.grid()).phi) > kPi / 4) continue;
    for (int x = 0; x < erp.grid().width(); ++x) {
      for (int c = 0; c < kFeatureChannels; ++c) {
        worst = std::max(worst, static_cast<double>(std::abs(erp.raster.at(x, y, c) - cp.raster.at(x, y, c))));
      }
    }
  }
  EXPECT_LT(worst, 0.05);
}

TEST(CpFeatures, DifferFromErpNearPoles) {
  const ErpGrid g(512, 256);
  const ErpImage img = room_view(g);
  const FeatureMap erp = extract_erp_features(img, 4, false);
  const FeatureMap cp = extract_cp_features(img, 128, 4, false);
  double diff = 0.0;
  int n = 0;
  for (int y = 0; y < erp.grid().height(); ++y) {
    if (std::abs(pixel_to_spherical(0.5, y + 0.5, erp.grid()).phi) < 75.0 * kPi / 180.0) continue;
    for (int x = 0; x < erp.grid().width(); ++x) {
      diff += std::abs(erp.raster.at(x, y, kGradX) - cp.raster.at(x, y, kGradX));
      ++n;
    }
  }
  ASSERT_GT(n, 0);
  EXPECT_GT(diff / n, 1e-3);
}

TEST(Fusion, WeightAndLimits) {
  EXPECT_EQ(fusion_weight(0.0), 0.0);
  EXPECT_NEAR(fusion_weight(kPi / 2), 1.0, 1e-15);
  const ErpGrid g(64, 32);
  std::mt19937_64 rng(3);
  const FeatureMap a{testing_support::random_image(g, 4, rng), false};
  const FeatureMap b{testing_support::random_image(g, 4, rng), false};
  const FeatureMap same = fuse_biprojection(a, a);
  EXPECT_EQ(same.raster.data(), a.raster.data());
  const FeatureMap mixed = fuse_biprojection(a, b);
  for (int y = 0; y < g.height(); ++y) {
    const double w = fusion_weight(pixel_to_spherical(0.5, y + 0.5, g).phi);
    for (int x = 0; x < g.width(); ++x) {
      for (int c = 0; c < 4; ++c) {
        const float lo = std::min(a.raster.at(x, y, c), b.raster.at(x, y, c));
        const float hi = std::max(a.raster.at(x, y, c), b.raster.at(x, y, c));
        EXPECT_GE(mixed.raster.at(x, y, c), lo - 1e-6f);
        EXPECT_LE(mixed.raster.at(x, y, c), hi + 1e-6f);
        EXPECT_NEAR(mixed.raster.at(x, y, c), w * b.raster.at(x, y, c) + (1 - w) * a.raster.at(x, y, c), 1e-6);
      }
    }
  }
  // Rows nearest the equator are ERP-dominated, pole rows CP-dominated.
  EXPECT_LT(fusion_weight(pixel_to_spherical(0.5, 15.5, g).phi), 1e-2);
  EXPECT_GT(fusion_weight(pixel_to_spherical(0.5, 0.5, g).phi), 0.95);
  EXPECT_THROW(fuse_biprojection(a, FeatureMap{ErpImage(g, 3), false}), std::invalid_argument);
}

TEST(Fusion, NormalizedDotProductsAreBounded) {
  const ErpImage img = room_view(ErpGrid(128, 64));
  const FeatureMap f = extract_features(img, FeatureOptions{.downsample = 2});
  const FeatureMap h = extract_features(rotate_columns(img, 7), FeatureOptions{.downsample = 2});
  for (int y = 0; y < f.grid().height(); ++y) {
    for (int x = 0; x < f.grid().width(); ++x) {
      double dot = 0.0;
      for (int c = 0; c < kFeatureChannels; ++c) dot += f.raster.at(x, y, c) * h.raster.at(x, y, c);
      EXPECT_LE(std::abs(dot), 1.0 + 1e-6);
    }
  }
}

TEST(Luminance, Rec601) {
  const float rgb[3] = {1.0f, 0.0f, 0.0f};
  EXPECT_NEAR(luminance(rgb), 0.299, 1e-12);
  const float gray[2] = {0.2f, 0.4f};
  EXPECT_NEAR(luminance(gray), 0.3, 1e-7);
  EXPECT_NEAR(mean_luminance(ErpImage(ErpGrid(8, 4), 3, 0.5f)), 0.5, 1e-7);
}

}  // namespace
}  // namespace panosplat
