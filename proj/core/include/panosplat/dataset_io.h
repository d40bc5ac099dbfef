#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panosplat/pano_image.h"
#include "panosplat/sphere_geom.h"

namespace panosplat {

struct FrameEntry {
  std::string image;                 // relative to the scene directory
  std::optional<std::string> depth;  // SDPT, relative to the scene directory
  Pose c2w;
};

struct SceneManifest {
  double near = 0.1;
  double far = 10.0;
  std::vector<FrameEntry> frames;
};

/// Parses and validates scene.json text. Errors name the offending entry.
SceneManifest parse_manifest(const std::string& json_text);
std::string manifest_to_json(const SceneManifest& manifest);

/// A loaded scene directory; frames decode on demand.
class Scene {
 public:
  Scene(std::filesystem::path dir, SceneManifest manifest);

  const std::filesystem::path& dir() const { return dir_; }
  const SceneManifest& manifest() const { return manifest_; }
  int frame_count() const { return static_cast<int>(manifest_.frames.size()); }
  const Pose& pose(int i) const;

  ErpImage load_image(int i) const;
  std::optional<DepthMap> load_depth(int i) const;

 private:
  const FrameEntry& frame(int i) const;

  std::filesystem::path dir_;
  SceneManifest manifest_;
};

/// Reads `dir`/scene.json and checks every referenced file exists.
/// Throws IoError (missing / unreadable files) or std::invalid_argument (bad content).
Scene load_scene(const std::filesystem::path& dir);

/// Writes images as frame_XXXX.png, depths as frame_XXXX.sdpt, and scene.json.
void write_scene(const std::filesystem::path& dir, double near, double far,
                 const std::vector<Pose>& poses, const std::vector<ErpImage>& images,
                 const std::vector<std::optional<DepthMap>>& depths);

struct EvalTuple {
  int context_first = 0;
  int context_second = 0;
  std::vector<int> targets;  // ascending, strictly between the context indices
};

inline constexpr int kDefaultEvalInterval = 100;
inline constexpr int kDefaultEvalTargets = 3;

/// Context pairs (i, i + interval) for i = 0, interval, 2 * interval, ... with
/// n_targets distinct seeded targets strictly between them. Returns an empty list
/// when the trajectory is shorter than the interval.
std::vector<EvalTuple> select_eval_tuples(int frame_count, int interval = kDefaultEvalInterval,
                                          int n_targets = kDefaultEvalTargets, std::uint64_t seed = 0);

}  // namespace panosplat
