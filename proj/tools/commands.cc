#include "commands.h"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "panosplat/image_io.h"
#include "panosplat/parallel.h"
#include "panosplat/server.h"
#include "panosplat/synth.h"

namespace panosplat::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path sibling(const fs::path& p, const std::string& suffix) {
  return p.parent_path() / (p.stem().string() + suffix);
}

void ensure_parent(const fs::path& p) {
  if (!p.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create " + p.parent_path().string() + ": " + ec.message());
}

void write_text(const fs::path& p, const std::string& text) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed: " + p.string());
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_metrics(const DepthMetrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "abs_diff %.6g  abs_rel %.6g  rmse %.6g  delta<1.25 %.6g%%",
                m.abs_diff, m.abs_rel, m.rmse, m.delta_1_25);
  return buf;
}

}  // namespace

void cmd_synth(const SynthArgs& args) {
  if (args.out_dir.empty()) throw std::invalid_argument("synth: --out is required");
  if (args.n_frames < 1) throw std::invalid_argument("synth: --frames must be >= 1");
  if (args.width < 8 || args.width % 4 != 0) {
    throw std::invalid_argument("synth: --width must be a multiple of 4, at least 8");
  }
  const SyntheticScene scene = make_scene(args.preset);
  const std::vector<Pose> poses = make_trajectory(scene, args.n_frames, args.baseline, args.seed);
  const ErpGrid grid(args.width, args.width / 2);
  std::vector<ErpImage> images;
  std::vector<std::optional<DepthMap>> depths;
  for (const Pose& p : poses) {
    GroundTruthView v = render_gt(scene, p, grid);
    images.push_back(std::move(v.image));
    depths.emplace_back(std::move(v.depth));
  }
  write_scene(args.out_dir, kDefaultNear, kDefaultFar, poses, images, depths);
}

ReconstructSummary cmd_reconstruct(const ReconstructArgs& args, std::ostream& log) {
  if (args.out.empty()) throw std::invalid_argument("reconstruct: --out is required");
  const Scene scene = load_scene(args.scene_dir);
  ReconstructConfig config;
  config.depth.num_candidates = args.candidates;
  config.depth.near = args.near;
  config.depth.far = args.far;
  config.depth.temperature = args.temperature;
  config.decode.scale_multiplier = args.sigma;

  Reconstruction rec;
  try {
    rec = reconstruct_frames(scene, args.first, args.second, config);
  } catch (const std::exception& e) {
    throw std::runtime_error("reconstruct frames (" + std::to_string(args.first) + ", " +
                             std::to_string(args.second) + "): " + e.what());
  }
  ensure_parent(args.out);
  write_splats(args.out, rec.splats);

  ReconstructSummary summary;
  summary.splat_count = rec.splats.size();
  log << "wrote " << rec.splats.size() << " splats to " << args.out.string() << "\n";
  const int frames[2] = {args.first, args.second};
  for (int k = 0; k < 2; ++k) {
    const fs::path depth_path = sibling(args.out, "_view" + std::to_string(k) + ".sdpt");
    write_depth(depth_path, rec.depths[k].depth);
    const ErpImage& conf = rec.depths[k].confidence;
    write_sdpt(sibling(args.out, "_view" + std::to_string(k) + "_conf.sdpt"),
               {static_cast<std::uint32_t>(conf.width()), static_cast<std::uint32_t>(conf.height()), conf.data()});
    summary.depth_files.push_back(depth_path);
    std::optional<DepthMetrics> m;
    if (auto gt = scene.load_depth(frames[k])) {
      m = depth_metrics(rec.depths[k].depth, *gt);
      log << "frame " << frames[k] << " depth: " << format_metrics(*m) << "\n";
    }
    summary.metrics.push_back(m);
  }
  return summary;
}

void cmd_render(const RenderArgs& args) {
  if (args.out.empty()) throw std::invalid_argument("render: --out is required");
  const bool from_scene = args.scene_dir.has_value() || args.index.has_value();
  if (from_scene == args.c2w.has_value()) {
    throw std::invalid_argument("render: give either --scene with --index, or --pose");
  }
  Pose pose;
  if (from_scene) {
    if (!args.scene_dir || !args.index) throw std::invalid_argument("render: --scene and --index go together");
    const Scene scene = load_scene(*args.scene_dir);
    pose = scene.pose(*args.index);
  } else {
    pose = Pose::from_row_major(*args.c2w);
  }
  const SplatSet splats = read_splats(args.splats);
  ensure_parent(args.out);
  const fs::path depth_path = sibling(args.out, "_depth.sdpt");
  if (args.mode == "erp") {
    if (args.width < 8 || args.width % 4 != 0) {
      throw std::invalid_argument("render: erp --width must be a multiple of 4, at least 8");
    }
    const PanoramaRender r = render_panorama(splats, pose, ErpGrid(args.width, args.width / 2), args.background);
    write_png(args.out, r.image);
    write_depth(depth_path, r.depth);
  } else if (args.mode == "pinhole") {
    if (args.width < 1) throw std::invalid_argument("render: --width must be positive");
    if (!(args.fov_deg > 0.0 && args.fov_deg < 180.0)) throw std::invalid_argument("render: --fov must be in (0, 180)");
    const RenderOutput r = render_pinhole(splats, pose, args.width, args.fov_deg, args.background);
    write_png(args.out, r.color_raster());
    write_sdpt(depth_path, {static_cast<std::uint32_t>(r.width), static_cast<std::uint32_t>(r.height), r.depth});
  } else {
    throw std::invalid_argument("render: --mode must be erp or pinhole, got " + args.mode);
  }
}

ReconstructConfig parse_reconstruct_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ReconstructConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "candidates") c.depth.num_candidates = v.get<int>();
      else if (key == "near") c.depth.near = v.get<double>();
      else if (key == "far") c.depth.far = v.get<double>();
      else if (key == "temperature") c.depth.temperature = v.get<double>();
      else if (key == "sigma") c.decode.scale_multiplier = v.get<double>();
      else if (key == "downsample") c.depth.features.downsample = v.get<int>();
      else if (key == "refine_radius") c.depth.refine_radius = v.get<int>();
      else if (key == "use_cubemap") c.depth.features.use_cubemap = v.get<bool>();
      else if (key == "opacity_floor") c.decode.opacity_floor = v.get<double>();
      else throw std::invalid_argument("config: unknown key \"" + key + "\"");
    }
  } catch (const json::type_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!(c.depth.temperature > 0.0)) throw std::invalid_argument("config: temperature must be > 0");
  if (!(c.decode.scale_multiplier > 0.0)) throw std::invalid_argument("config: sigma must be > 0");
  if (c.depth.refine_radius < 0) throw std::invalid_argument("config: refine_radius must be >= 0");
  return c;
}

EvalReport cmd_eval(const EvalArgs& args) {
  const Scene scene = load_scene(args.scene_dir);
  EvalConfig config;
  config.interval = args.interval;
  config.n_targets = args.n_targets;
  config.seed = args.seed;
  if (args.config) config.reconstruct = parse_reconstruct_config(read_text(*args.config));
  config.oracle_depth = args.oracle_depth;
  config.oracle_color = args.oracle_color;
  EvalReport report = evaluate(scene, config);
  if (!args.json_out.empty()) write_text(args.json_out, report.to_json());
  if (!args.csv_out.empty()) write_text(args.csv_out, report.to_csv());
  return report;
}

int cmd_serve(const ServeArgs& args, bool (*stop_requested)(), std::ostream& log) {
  if (args.splats.has_value() == args.scene_dir.has_value()) {
    throw std::invalid_argument("serve: give exactly one of --splats or --scene");
  }
  ServeOptions opts;
  opts.host = args.host;
  opts.port = args.port;
  opts.workers = args.workers > 0 ? args.workers : worker_count();
  opts.static_dir = args.static_dir;
  SplatSet splats;
  if (args.splats) {
    splats = read_splats(*args.splats);
  } else {
    const Scene scene = load_scene(*args.scene_dir);
    ReconstructConfig config;
    config.depth.near = scene.manifest().near;
    config.depth.far = scene.manifest().far;
    log << "reconstructing frames " << args.first << " and " << args.second << "\n";
    splats = reconstruct_frames(scene, args.first, args.second, config).splats;
    opts.near = scene.manifest().near;
    opts.far = scene.manifest().far;
    opts.suggested_pose = scene.pose(args.first);
  }
  const std::size_t count = splats.size();
  auto service = std::make_shared<const RenderService>(std::move(splats), opts);
  HttpServer server(service);
  const int port = server.start();
  log << "serving " << count << " splats on http://" << opts.host << ":" << port << "\n" << std::flush;
  while (!stop_requested()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  log << "shutting down\n";
  server.stop();
  server.wait();
  return port;
}

}  // namespace panosplat::cli
