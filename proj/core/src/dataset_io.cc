#include "panosplat/dataset_io.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "panosplat/image_io.h"

namespace panosplat {

using nlohmann::json;

namespace {

std::string entry_name(std::size_t i) { return "frames[" + std::to_string(i) + "]"; }

}  // namespace

SceneManifest parse_manifest(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scene.json: ") + e.what());
  }
  SceneManifest m;
  try {
    m.near = j.at("near").get<double>();
    m.far = j.at("far").get<double>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scene.json: near/far: ") + e.what());
  }
  if (!(m.near > 0.0) || !(m.far > m.near)) {
    throw std::invalid_argument("scene.json: need 0 < near < far");
  }
  if (!j.contains("frames") || !j["frames"].is_array() || j["frames"].empty()) {
    throw std::invalid_argument("scene.json: frames must be a non-empty array");
  }
  const json& frames = j["frames"];
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const json& f = frames[i];
    FrameEntry e;
    try {
      e.image = f.at("image").get<std::string>();
      if (f.contains("depth") && !f["depth"].is_null()) e.depth = f["depth"].get<std::string>();
      const auto values = f.at("c2w").get<std::vector<double>>();
      if (values.size() != 16) {
        throw std::invalid_argument("c2w must have 16 numbers, got " + std::to_string(values.size()));
      }
      std::array<double, 16> m16{};
      std::copy(values.begin(), values.end(), m16.begin());
      e.c2w = Pose::from_row_major(m16);
    } catch (const json::exception& ex) {
      throw std::invalid_argument("scene.json " + entry_name(i) + ": " + ex.what());
    } catch (const std::invalid_argument& ex) {
      throw std::invalid_argument("scene.json " + entry_name(i) + ": " + ex.what());
    }
    m.frames.push_back(std::move(e));
  }
  return m;
}

std::string manifest_to_json(const SceneManifest& manifest) {
  json j;
  j["near"] = manifest.near;
  j["far"] = manifest.far;
  j["frames"] = json::array();
  for (const FrameEntry& f : manifest.frames) {
    json e;
    e["image"] = f.image;
    e["depth"] = f.depth ? json(*f.depth) : json(nullptr);
    const auto m = f.c2w.to_row_major();
    e["c2w"] = std::vector<double>(m.begin(), m.end());
    j["frames"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

Scene::Scene(std::filesystem::path dir, SceneManifest manifest)
    : dir_(std::move(dir)), manifest_(std::move(manifest)) {}

const FrameEntry& Scene::frame(int i) const {
  if (i < 0 || i >= frame_count()) {
    throw std::out_of_range("frame index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(frame_count()) + ")");
  }
  return manifest_.frames[i];
}

const Pose& Scene::pose(int i) const { return frame(i).c2w; }

ErpImage Scene::load_image(int i) const { return read_png_erp(dir_ / frame(i).image); }

std::optional<DepthMap> Scene::load_depth(int i) const {
  const FrameEntry& f = frame(i);
  if (!f.depth) return std::nullopt;
  return read_depth(dir_ / *f.depth);
}

Scene load_scene(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "scene.json";
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open " + manifest_path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  SceneManifest m = parse_manifest(ss.str());
  for (std::size_t i = 0; i < m.frames.size(); ++i) {
    if (!std::filesystem::is_regular_file(dir / m.frames[i].image)) {
      throw IoError("scene.json " + entry_name(i) + ": image not found: " + m.frames[i].image);
    }
    if (m.frames[i].depth && !std::filesystem::is_regular_file(dir / *m.frames[i].depth)) {
      throw IoError("scene.json " + entry_name(i) + ": depth not found: " + *m.frames[i].depth);
    }
  }
  return Scene(dir, std::move(m));
}

void write_scene(const std::filesystem::path& dir, double near, double far,
                 const std::vector<Pose>& poses, const std::vector<ErpImage>& images,
                 const std::vector<std::optional<DepthMap>>& depths) {
  if (poses.size() != images.size() || depths.size() != images.size()) {
    throw std::invalid_argument("write_scene: poses, images and depths must have equal length");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  SceneManifest m;
  m.near = near;
  m.far = far;
  for (std::size_t i = 0; i < images.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof(stem), "frame_%04zu", i);
    FrameEntry e;
    e.image = std::string(stem) + ".png";
    write_png(dir / e.image, images[i]);
    if (depths[i]) {
      e.depth = std::string(stem) + ".sdpt";
      write_depth(dir / *e.depth, *depths[i]);
    }
    e.c2w = poses[i];
    m.frames.push_back(std::move(e));
  }
  std::ofstream out(dir / "scene.json");
  if (!out) throw IoError("cannot write " + (dir / "scene.json").string());
  out << manifest_to_json(m);
}

std::vector<EvalTuple> select_eval_tuples(int frame_count, int interval, int n_targets, std::uint64_t seed) {
  if (interval < 2) throw std::invalid_argument("select_eval_tuples: interval must be >= 2");
  if (n_targets < 1 || n_targets > interval - 1) {
    throw std::invalid_argument("select_eval_tuples: need 1 <= n_targets <= interval - 1");
  }
  std::vector<EvalTuple> tuples;
  std::mt19937_64 rng(seed);
  for (int first = 0; first + interval < frame_count; first += interval) {
    EvalTuple t;
    t.context_first = first;
    t.context_second = first + interval;
    std::vector<int> pool;
    for (int k = first + 1; k < first + interval; ++k) pool.push_back(k);
    for (int k = 0; k < n_targets; ++k) {
      const auto remaining = static_cast<std::uint64_t>(pool.size() - k);
      const auto pick = static_cast<std::size_t>(k + rng() % remaining);
      std::swap(pool[k], pool[pick]);
    }
    t.targets.assign(pool.begin(), pool.begin() + n_targets);
    std::sort(t.targets.begin(), t.targets.end());
    tuples.push_back(std::move(t));
  }
  return tuples;
}

}  // namespace panosplat
