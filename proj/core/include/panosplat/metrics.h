#pragma once

#include <cstddef>

#include "panosplat/pano_image.h"

namespace panosplat {

inline constexpr double kPsnrCap = 100.0;

/// 10 * log10(1 / MSE) over all pixels and channels, values assumed in [0, 1].
/// Returns kPsnrCap when MSE < 1e-10. Throws std::invalid_argument on shape mismatch.
double psnr(const ErpImage& a, const ErpImage& b);

/// Mean SSIM over 11x11 Gaussian windows (sigma 1.5, k1 0.01, k2 0.03, data range 1),
/// averaged over channels. Only windows fully inside the image are used.
double ssim(const ErpImage& a, const ErpImage& b);

struct DepthMetrics {
  double abs_diff = 0.0;
  double abs_rel = 0.0;
  double rmse = 0.0;
  double delta_1_25 = 0.0;  // percent of pixels with max(p/g, g/p) < 1.25
  std::size_t count = 0;
};

/// Metrics over pixels valid in both maps. Throws std::invalid_argument when the
/// grids differ or no pixel is valid in both.
DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt);

/// Same, restricted to pixels where mask[i] != 0.
DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt,
                           const std::vector<unsigned char>& mask);

}  // namespace panosplat
