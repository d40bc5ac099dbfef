#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "panosplat/dataset_io.h"
#include "panosplat/gaussians.h"
#include "panosplat/metrics.h"
#include "panosplat/renderer.h"
#include "panosplat/sweep.h"

namespace panosplat {

inline constexpr double kDefaultReconstructSigma = 0.5;

struct ReconstructConfig {
  DepthConfig depth;
  DecodeConfig decode{.scale_multiplier = kDefaultReconstructSigma};
};

struct Reconstruction {
  SplatSet splats;                  // union of both views' splats, view 0 first
  std::vector<DepthResult> depths;  // per input view, full resolution
};

/// Depth for every view against the others, then pixel-aligned splats per view, merged.
Reconstruction reconstruct(const std::vector<ErpImage>& images, const std::vector<Pose>& poses,
                           const ReconstructConfig& config);

/// Frame-index variant; errors name the missing frame.
Reconstruction reconstruct_frames(const Scene& scene, int first, int second, const ReconstructConfig& config);

struct EvalConfig {
  int interval = kDefaultEvalInterval;
  int n_targets = kDefaultEvalTargets;
  std::uint64_t seed = 0;
  ReconstructConfig reconstruct;
  Vec3 background = Vec3::Zero();
  bool oracle_depth = false;  // score GT depth as the prediction (harness check)
  bool oracle_color = false;  // score GT color as the prediction (harness check)
};

struct TargetReport {
  int frame = 0;
  double psnr = 0.0;
  double ssim = 0.0;
  std::optional<DepthMetrics> depth;
};

struct TupleReport {
  EvalTuple tuple;
  std::vector<TargetReport> targets;
  double psnr = 0.0;
  double ssim = 0.0;
  std::optional<DepthMetrics> depth;  // mean over targets with GT depth
};

struct EvalReport {
  std::vector<TupleReport> rows;
  double psnr = 0.0;
  double ssim = 0.0;
  std::optional<DepthMetrics> depth;

  int tuples() const { return static_cast<int>(rows.size()); }
  /// {"tuples", "psnr", "ssim", "depth": {abs_diff, abs_rel, rmse, delta_1_25} | null},
  /// numbers rounded to 6 significant digits.
  std::string to_json() const;
  /// One row per tuple.
  std::string to_csv() const;
};

EvalReport evaluate(const Scene& scene, const EvalConfig& config);

/// Rounds to 6 significant digits.
double round6(double v);

}  // namespace panosplat
