#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "panosplat/pipeline.h"

namespace panosplat::cli {

struct SynthArgs {
  std::filesystem::path out_dir;
  std::string preset = "room";
  int n_frames = 5;
  double baseline = 0.5;  // distance between the first and last frame, meters
  std::uint64_t seed = 0;
  int width = 512;
};

void cmd_synth(const SynthArgs& args);

struct ReconstructArgs {
  std::filesystem::path scene_dir;
  int first = 0;
  int second = 1;
  int candidates = kDefaultCandidateCount;
  double near = kDefaultNear;
  double far = kDefaultFar;
  double temperature = kDefaultMatchingTemperature;
  double sigma = kDefaultReconstructSigma;
  std::filesystem::path out;  // SPLT; per-view depth and confidence go next to it as
                              // <stem>_view<k>.sdpt and <stem>_view<k>_conf.sdpt
};

struct ReconstructSummary {
  std::size_t splat_count = 0;
  std::vector<std::filesystem::path> depth_files;
  std::vector<std::optional<DepthMetrics>> metrics;  // per view, when GT depth exists
};

ReconstructSummary cmd_reconstruct(const ReconstructArgs& args, std::ostream& log);

struct RenderArgs {
  std::filesystem::path splats;
  std::optional<std::filesystem::path> scene_dir;  // pose source together with index
  std::optional<int> index;
  std::optional<std::array<double, 16>> c2w;  // explicit row-major pose
  int width = 512;
  std::string mode = "erp";
  double fov_deg = 90.0;
  Vec3 background = Vec3::Zero();
  std::filesystem::path out;  // PNG; depth goes next to it as <stem>_depth.sdpt
};

void cmd_render(const RenderArgs& args);

struct EvalArgs {
  std::filesystem::path scene_dir;
  int interval = kDefaultEvalInterval;
  int n_targets = kDefaultEvalTargets;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> config;  // JSON overrides of the reconstruct defaults
  bool oracle_depth = false;
  bool oracle_color = false;
  std::filesystem::path json_out;
  std::filesystem::path csv_out;
};

EvalReport cmd_eval(const EvalArgs& args);

/// Keys: candidates, near, far, temperature, sigma, downsample, refine_radius,
/// use_cubemap, opacity_floor. Unknown keys are rejected.
ReconstructConfig parse_reconstruct_config(const std::string& json_text);

struct ServeArgs {
  std::optional<std::filesystem::path> splats;
  std::optional<std::filesystem::path> scene_dir;
  int first = 0;
  int second = 1;
  std::string host = "127.0.0.1";
  int port = 8080;
  int workers = 0;  // 0: worker_count()
  std::filesystem::path static_dir;
};

/// Serves until `stop_requested` returns true.
int cmd_serve(const ServeArgs& args, bool (*stop_requested)(), std::ostream& log);

}  // namespace panosplat::cli
