#include "panosplat/features.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "panosplat/parallel.h"

namespace panosplat {
namespace {

void check_downsample(int downsample) {
  if (downsample != 1 && downsample != 2 && downsample != 4 && downsample != 8) {
    throw std::invalid_argument("downsample must be 1, 2, 4 or 8, got " + std::to_string(downsample));
  }
}

// Writes the descriptor of a pixel given its 3x3 luminance neighborhood
// n[dy + 1][dx + 1].
void describe(const double n[3][3], std::span<float> out) {
  double mean = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) mean += n[j][i];
  }
  mean /= 9.0;
  out[kLuminance] = static_cast<float>(n[1][1]);
  out[kGradX] = static_cast<float>(0.5 * (n[1][2] - n[1][0]));
  out[kGradY] = static_cast<float>(0.5 * (n[2][1] - n[0][1]));
  out[kDetail] = static_cast<float>(n[1][1] - mean);
}

}  // namespace

double luminance(std::span<const float> px) {
  if (px.size() == 3) return 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
  double s = 0.0;
  for (float v : px) s += v;
  return s / static_cast<double>(px.size());
}

void normalize_features(FeatureMap& f) {
  const int c = f.channels();
  auto& data = f.raster.data();
  const std::size_t n = f.grid().pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    float* v = &data[i * c];
    double sq = 0.0;
    for (int k = 0; k < c; ++k) sq += static_cast<double>(v[k]) * v[k];
    const double norm = std::sqrt(sq);
    for (int k = 0; k < c; ++k) v[k] = norm > 1e-12 ? static_cast<float>(v[k] / norm) : 0.0f;
  }
  f.normalized = true;
}

double mean_luminance(const ErpImage& img) {
  double sum = 0.0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) sum += luminance(img.pixel(x, y));
  }
  return sum / static_cast<double>(img.grid().pixel_count());
}

FeatureMap extract_erp_features(const ErpImage& img, int downsample, bool normalize, bool center) {
  check_downsample(downsample);
  const ErpImage small = box_downsample(img, downsample);
  const ErpGrid grid = small.grid();
  const int w = grid.width();
  const int h = grid.height();
  const double offset = center ? mean_luminance(img) : 0.0;
  std::vector<double> lum(grid.pixel_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      lum[static_cast<std::size_t>(y) * w + x] = luminance(small.pixel(x, y)) - offset;
    }
  }
  FeatureMap f{ErpImage(grid, kFeatureChannels), false};
  parallel_for(0, h, [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    double n[3][3];
    for (int x = 0; x < w; ++x) {
      for (int dy = -1; dy <= 1; ++dy) {
        const int row = std::clamp(y + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          const int col = (x + dx + w) % w;
          n[dy + 1][dx + 1] = lum[static_cast<std::size_t>(row) * w + col];
        }
      }
      describe(n, f.raster.pixel(x, y));
    }
  });
  if (normalize) normalize_features(f);
  return f;
}

FeatureMap extract_cp_features(const ErpImage& img, int face_size, int downsample, bool normalize,
                               bool center) {
  check_downsample(downsample);
  if (face_size % downsample != 0 || face_size / downsample < 2) {
    throw std::invalid_argument("face_size " + std::to_string(face_size) +
                                " not divisible into >= 2 pixels by downsample " +
                                std::to_string(downsample));
  }
  if (img.width() % downsample != 0 || img.height() % downsample != 0) {
    throw std::invalid_argument("image not divisible by downsample " + std::to_string(downsample));
  }
  const ErpGrid grid(img.width() / downsample, img.height() / downsample);
  const int m = face_size / downsample;
  const double offset = center ? mean_luminance(img) : 0.0;
  CubeMap cm(m, kFeatureChannels);
  for (int fi = 0; fi < kCubeFaceCount; ++fi) {
    const auto face = static_cast<CubeFace>(fi);
    const Raster padded = box_downsample(erp_to_face(img, face, face_size, downsample), downsample);
    const int pw = padded.width;
    std::vector<double> lum(static_cast<std::size_t>(pw) * pw);
    for (int y = 0; y < pw; ++y) {
      for (int x = 0; x < pw; ++x) {
        lum[static_cast<std::size_t>(y) * pw + x] =
            luminance({&padded.data[padded.index(x, y, 0)], static_cast<std::size_t>(padded.channels)}) -
            offset;
      }
    }
    Raster& out = cm.face(face);
    double n[3][3];
    for (int y = 0; y < m; ++y) {
      for (int x = 0; x < m; ++x) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            n[dy + 1][dx + 1] = lum[static_cast<std::size_t>(y + 1 + dy) * pw + (x + 1 + dx)];
          }
        }
        describe(n, {&out.data[out.index(x, y, 0)], static_cast<std::size_t>(kFeatureChannels)});
      }
    }
  }
  FeatureMap f{cubemap_to_erp(cm, grid), false};
  if (normalize) normalize_features(f);
  return f;
}

double fusion_weight(double phi) { return 1.0 - std::cos(phi); }

FeatureMap fuse_biprojection(const FeatureMap& f_erp, const FeatureMap& f_cp) {
  if (f_erp.grid() != f_cp.grid() || f_erp.channels() != f_cp.channels()) {
    throw std::invalid_argument("fuse_biprojection: feature maps differ in shape");
  }
  const ErpGrid grid = f_erp.grid();
  const int c = f_erp.channels();
  FeatureMap out{ErpImage(grid, c), false};
  for (int y = 0; y < grid.height(); ++y) {
    const double w = fusion_weight(pixel_to_spherical(0.5, y + 0.5, grid).phi);
    for (int x = 0; x < grid.width(); ++x) {
      for (int k = 0; k < c; ++k) {
        out.raster.at(x, y, k) =
            static_cast<float>(w * f_cp.raster.at(x, y, k) + (1.0 - w) * f_erp.raster.at(x, y, k));
      }
    }
  }
  if (f_erp.normalized && f_cp.normalized) normalize_features(out);
  return out;
}

FeatureMap extract_features(const ErpImage& img, const FeatureOptions& opt) {
  FeatureMap erp = extract_erp_features(img, opt.downsample, opt.normalize, opt.center_luminance);
  if (!opt.use_cubemap) return erp;
  const int face_size = opt.face_size > 0 ? opt.face_size : img.width() / 4;
  return fuse_biprojection(
      erp, extract_cp_features(img, face_size, opt.downsample, opt.normalize, opt.center_luminance));
}

}  // namespace panosplat
