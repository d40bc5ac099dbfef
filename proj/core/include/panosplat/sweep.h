#pragma once

#include <span>
#include <vector>

#include "panosplat/features.h"
#include "panosplat/pano_image.h"
#include "panosplat/sphere_geom.h"

namespace panosplat {

inline constexpr double kDefaultNear = 0.1;
inline constexpr double kDefaultFar = 10.0;
inline constexpr int kDefaultCandidateCount = 128;

/// Radial depth hypotheses, log-spaced from near to far inclusive.
struct DepthCandidates {
  double near = kDefaultNear;
  double far = kDefaultFar;
  std::vector<double> values;

  int count() const { return static_cast<int>(values.size()); }
};

/// values[k] = near * (far / near)^(k / (count - 1)).
/// Throws std::invalid_argument unless 0 < near < far and count >= 2.
DepthCandidates make_candidates(double near = kDefaultNear, double far = kDefaultFar,
                                int count = kDefaultCandidateCount);

/// Matching scores laid out [(y * W + x) * D + m].
struct CostVolume {
  ErpGrid grid;
  DepthCandidates candidates;
  std::vector<float> data;

  CostVolume(const ErpGrid& g, DepthCandidates cands, float fill = 0.0f);

  int depth_count() const { return candidates.count(); }
  std::size_t index(int x, int y, int m) const {
    return (static_cast<std::size_t>(y) * grid.width() + x) * depth_count() + m;
  }
  float& at(int x, int y, int m) { return data[index(x, y, m)]; }
  float at(int x, int y, int m) const { return data[index(x, y, m)]; }
  std::span<const float> scores(int x, int y) const {
    return {data.data() + index(x, y, 0), static_cast<std::size_t>(depth_count())};
  }
};

/// For every reference pixel and candidate radius: lift the pixel ray to that
/// radius, move the point into each source camera, sample the source features
/// bilinearly at its equirect position and score dot(F_ref, F_src) / sqrt(C).
/// Scores from several sources are averaged. Points behind a source camera need
/// no special handling since every direction has an equirect pixel.
CostVolume build_cost_volume(const FeatureMap& f_ref, std::span<const FeatureMap> f_src,
                             const Pose& pose_ref, std::span<const Pose> pose_src,
                             const DepthCandidates& cands);

/// Residual refinement: cv + (box(cv) - cv) with a (2r+1)^2 box per depth slice,
/// wrapped across the seam and edge-replicated at the poles. Radius 0 is the identity.
CostVolume refine_cost_volume(const CostVolume& cv, int radius);

struct DepthResult {
  DepthMap depth;      // softmax-weighted candidate radius
  ErpImage confidence;  // max softmax probability, 1 channel
};

struct PixelDepth {
  double depth;
  double confidence;
};

/// Softmax over one pixel's scores / temperature (max-subtracted), depth clamped
/// to [near, far].
PixelDepth softmax_pixel(std::span<const float> scores, const DepthCandidates& cands,
                         double temperature);

DepthResult softmax_depth(const CostVolume& cv, double temperature = 1.0);

inline constexpr int kDefaultMatchingDownsample = 4;
inline constexpr int kDefaultRefineRadius = 3;
inline constexpr double kDefaultMatchingTemperature = 1e-3;

struct DepthConfig {
  FeatureOptions features{.downsample = kDefaultMatchingDownsample};
  double near = kDefaultNear;
  double far = kDefaultFar;
  int num_candidates = kDefaultCandidateCount;
  int refine_radius = kDefaultRefineRadius;
  double temperature = kDefaultMatchingTemperature;
};

/// Each view in turn is the reference and all other views are sources. Depth and
/// confidence are upsampled bilinearly to the input resolution.
std::vector<DepthResult> estimate_depth(std::span<const ErpImage> images, std::span<const Pose> poses,
                                        const DepthConfig& config);

}  // namespace panosplat
