// panosplat: synthesize scenes, reconstruct splats from panorama pairs, render,
// evaluate and serve renders over HTTP.

#include <atomic>
#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "panosplat/parallel.h"
#include "panosplat/synth.h"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

bool stop_requested() { return g_stop.load(); }

}  // namespace

int main(int argc, char** argv) {
  using namespace panosplat;
  CLI::App app{"Panoramic Gaussian splatting from wide-baseline image pairs"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

  cli::SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Write a synthetic scene directory with GT depth");
  s->add_option("--out", synth.out_dir, "Output scene directory")->required();
  s->add_option("--preset", synth.preset, "Scene preset")
      ->check(CLI::IsMember(scene_presets()))
      ->capture_default_str();
  s->add_option("--frames", synth.n_frames, "Number of frames")->capture_default_str();
  s->add_option("--baseline", synth.baseline, "Distance between first and last frame (m)")
      ->capture_default_str();
  s->add_option("--seed", synth.seed, "Trajectory seed")->capture_default_str();
  s->add_option("--width", synth.width, "Panorama width (height is width / 2)")->capture_default_str();

  cli::ReconstructArgs rec;
  auto* r = app.add_subcommand("reconstruct", "Estimate depth for a frame pair and decode splats");
  r->add_option("--scene", rec.scene_dir, "Scene directory")->required();
  std::pair<int, int> rec_frames{0, 1};
  r->add_option("--frames", rec_frames, "Context frame indices i j")->capture_default_str();
  r->add_option("-D,--candidates", rec.candidates, "Depth candidates")->capture_default_str();
  r->add_option("--near", rec.near, "Nearest candidate (m)")->capture_default_str();
  r->add_option("--far", rec.far, "Farthest candidate (m)")->capture_default_str();
  r->add_option("--temperature", rec.temperature, "Softmax temperature")->capture_default_str();
  r->add_option("--sigma", rec.sigma, "Splat scale multiplier")->capture_default_str();
  r->add_option("--out", rec.out, "Output SPLT file")->required();

  cli::RenderArgs ren;
  std::vector<double> pose_values;
  std::vector<double> background;
  auto* v = app.add_subcommand("render", "Render a splat file at a pose");
  v->add_option("--splats", ren.splats, "SPLT file")->required()->check(CLI::ExistingFile);
  v->add_option("--scene", ren.scene_dir, "Scene directory (pose source)");
  v->add_option("--index", ren.index, "Frame index in --scene");
  v->add_option("--pose", pose_values, "Camera-to-world, 16 row-major numbers")->expected(16);
  v->add_option("--width", ren.width, "Output width")->capture_default_str();
  v->add_option("--mode", ren.mode, "erp or pinhole")
      ->check(CLI::IsMember({"erp", "pinhole"}))
      ->capture_default_str();
  v->add_option("--fov", ren.fov_deg, "Pinhole field of view (degrees)")->capture_default_str();
  v->add_option("--background", background, "Background rgb")->expected(3);
  v->add_option("--out", ren.out, "Output PNG")->required();

  cli::EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Evaluate novel views and depth on a scene");
  e->add_option("--scene", ev.scene_dir, "Scene directory")->required();
  e->add_option("--interval", ev.interval, "Frames between context views")->capture_default_str();
  e->add_option("--targets", ev.n_targets, "Targets per tuple")->capture_default_str();
  e->add_option("--seed", ev.seed, "Target selection seed")->capture_default_str();
  e->add_option("--config", ev.config, "JSON reconstruct overrides")->check(CLI::ExistingFile);
  e->add_flag("--oracle-depth", ev.oracle_depth, "Score GT depth as the prediction");
  e->add_flag("--oracle-color", ev.oracle_color, "Score GT color as the prediction");
  e->add_option("--json", ev.json_out, "Report JSON path");
  e->add_option("--csv", ev.csv_out, "Per-tuple CSV path");

  cli::ServeArgs srv;
  auto* h = app.add_subcommand("serve", "Serve renders over HTTP");
  h->add_option("--splats", srv.splats, "SPLT file")->check(CLI::ExistingFile);
  h->add_option("--scene", srv.scene_dir, "Scene directory, reconstructed from --frames");
  std::pair<int, int> srv_frames{0, 1};
  h->add_option("--frames", srv_frames, "Context frame indices i j")->capture_default_str();
  h->add_option("--host", srv.host, "Bind address")->capture_default_str();
  h->add_option("--port", srv.port, "Port (0 picks a free one)")->capture_default_str();
  h->add_option("--workers", srv.workers, "Concurrent renders (0: --threads)");
  h->add_option("--static-dir", srv.static_dir, "Viewer assets served at /");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) set_worker_count(threads);

  try {
    if (s->parsed()) {
      cli::cmd_synth(synth);
    } else if (r->parsed()) {
      std::tie(rec.first, rec.second) = rec_frames;
      cli::cmd_reconstruct(rec, std::cout);
    } else if (v->parsed()) {
      if (!pose_values.empty()) {
        std::array<double, 16> m{};
        std::copy(pose_values.begin(), pose_values.end(), m.begin());
        ren.c2w = m;
      }
      if (!background.empty()) ren.background = Vec3(background[0], background[1], background[2]);
      cli::cmd_render(ren);
    } else if (e->parsed()) {
      std::cout << cli::cmd_eval(ev).to_json();
    } else if (h->parsed()) {
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::tie(srv.first, srv.second) = srv_frames;
      cli::cmd_serve(srv, stop_requested, std::cout);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
