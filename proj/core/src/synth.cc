#include "panosplat/synth.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "panosplat/parallel.h"

namespace panosplat {
namespace {

constexpr int kGratingComponents = 6;
constexpr double kGratingAmplitude = 0.07;
constexpr double kGoldenAngle = 2.399963229728653;

}  // namespace

Vec3 Texture::eval(double s, double t) const {
  switch (kind) {
    case Kind::kConstant:
      return color_a;
    case Kind::kCheckerboard: {
      const long i = static_cast<long>(std::floor(s / (0.5 * param)));
      const long j = static_cast<long>(std::floor(t / (0.5 * param)));
      return ((i + j) % 2 == 0) ? color_a : color_b;
    }
    case Kind::kSineGrating: {
      double w = 0.5;
      for (int i = 0; i < kGratingComponents; ++i) {
        const double f = 2.0 * kPi * param * std::exp2(static_cast<double>(i) / (kGratingComponents - 1));
        const double angle = 0.3 + kGoldenAngle * i;
        w += kGratingAmplitude * std::sin(f * (std::cos(angle) * s + std::sin(angle) * t) + 1.7 * i);
      }
      w = std::clamp(w, 0.0, 1.0);
      return (1.0 - w) * color_a + w * color_b;
    }
  }
  return color_a;
}

bool SyntheticScene::camera_valid(const Vec3& p, double margin) const {
  for (int k = 0; k < 3; ++k) {
    if (!(std::abs(p[k]) < 0.5 * size[k] - margin)) return false;
  }
  for (const SphereObject& s : spheres) {
    if ((p - s.center).norm() <= s.radius + margin) return false;
  }
  return true;
}

SyntheticScene make_scene(const std::string& preset) {
  SyntheticScene scene;
  if (preset == "room" || preset == "room_sphere") {
    scene.walls = {
        Texture::sine_grating(2.0, {0.15, 0.25, 0.55}, {0.85, 0.75, 0.45}),   // +x
        Texture::sine_grating(1.6, {0.55, 0.20, 0.15}, {0.60, 0.85, 0.80}),   // -x
        Texture::sine_grating(1.45, {0.85, 0.85, 0.80}, {0.35, 0.40, 0.50}),  // ceiling
        Texture::sine_grating(1.8, {0.30, 0.25, 0.20}, {0.80, 0.70, 0.55}),   // floor
        Texture::sine_grating(2.15, {0.20, 0.45, 0.25}, {0.90, 0.65, 0.70}),  // +z
        Texture::sine_grating(1.8, {0.70, 0.30, 0.60}, {0.30, 0.80, 0.40}),   // -z
    };
    if (preset == "room_sphere") {
      scene.spheres.push_back({Vec3(0.9, -0.6, 1.0), 0.45,
                               Texture::checkerboard(0.5, {0.9, 0.3, 0.2}, {0.2, 0.3, 0.9})});
    }
    return scene;
  }
  if (preset == "checker") {
    for (int w = 0; w < 6; ++w) {
      const double tint = 0.1 * w;
      scene.walls[w] = Texture::checkerboard(kDefaultCheckerPeriod, {0.2 + tint, 0.3, 0.4},
                                             {0.8, 0.7 - tint, 0.6});
    }
    return scene;
  }
  if (preset == "constant") {
    for (auto& w : scene.walls) w = Texture::constant({0.6, 0.5, 0.4});
    return scene;
  }
  throw std::invalid_argument("unknown scene preset '" + preset + "'");
}

std::vector<std::string> scene_presets() { return {"room", "room_sphere", "checker", "constant"}; }

RayHit trace(const SyntheticScene& scene, const Vec3& origin, const Vec3& dir) {
  double best = std::numeric_limits<double>::infinity();
  int wall = -1;
  for (int k = 0; k < 3; ++k) {
    if (dir[k] == 0.0) continue;
    const double bound = dir[k] > 0.0 ? 0.5 * scene.size[k] : -0.5 * scene.size[k];
    const double t = (bound - origin[k]) / dir[k];
    if (t > 0.0 && t < best) {
      best = t;
      wall = 2 * k + (dir[k] > 0.0 ? 0 : 1);
    }
  }
  const Texture* tex = wall >= 0 ? &scene.walls[wall] : nullptr;
  Vec3 hit = origin + best * dir;
  double s = 0.0, t = 0.0;
  const Texture* sphere_tex = nullptr;
  for (const SphereObject& sp : scene.spheres) {
    const Vec3 oc = origin - sp.center;
    const double b = oc.dot(dir);
    const double c = oc.squaredNorm() - sp.radius * sp.radius;
    const double disc = b * b - c;
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    double dist = -b - root;
    if (dist <= 0.0) dist = -b + root;
    if (dist > 0.0 && dist < best) {
      best = dist;
      hit = origin + dist * dir;
      const Vec3 n = (hit - sp.center) / sp.radius;
      s = sp.radius * std::atan2(n.x(), n.z());
      t = sp.radius * std::asin(std::clamp(n.y(), -1.0, 1.0));
      sphere_tex = &sp.texture;
    }
  }
  if (sphere_tex) return {best, sphere_tex->eval(s, t)};
  if (!tex) return {best, Vec3::Zero()};
  const int axis = wall / 2;
  const int ia = axis == 0 ? 2 : 0;
  const int ib = axis == 1 ? 2 : 1;
  return {best, tex->eval(hit[ia], hit[ib])};
}

GroundTruthView render_gt(const SyntheticScene& scene, const Pose& pose, const ErpGrid& grid) {
  if (!scene.camera_valid(pose.translation())) {
    throw std::invalid_argument("render_gt: camera must be inside the room and outside all spheres");
  }
  GroundTruthView out{ErpImage(grid, 3), DepthMap(grid)};
  parallel_for(0, grid.height(), [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    for (int x = 0; x < grid.width(); ++x) {
      const Vec3 dir = pose.transform_direction(pixel_direction(x, y, grid));
      const RayHit hit = trace(scene, pose.translation(), dir);
      for (int k = 0; k < 3; ++k) out.image.at(x, y, k) = static_cast<float>(std::clamp(hit.color[k], 0.0, 1.0));
      out.depth.at(x, y) = static_cast<float>(hit.distance);
    }
  });
  return out;
}

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

namespace {

constexpr double kWallMargin = 0.1;
constexpr int kMaxPlacementAttempts = 100;

Vec3 random_horizontal(std::mt19937_64& rng) {
  const double a = 2.0 * kPi * unit_uniform(rng());
  return {std::cos(a), 0.0, std::sin(a)};
}

}  // namespace

std::pair<Pose, Pose> make_pair_poses(const SyntheticScene& scene, double baseline, std::uint64_t seed) {
  const std::vector<Pose> traj = make_trajectory(scene, 2, baseline, seed);
  return {traj[0], traj[1]};
}

std::vector<Pose> make_trajectory(const SyntheticScene& scene, int n_frames, double extent,
                                  std::uint64_t seed) {
  if (n_frames < 1) throw std::invalid_argument("make_trajectory: need at least one frame");
  if (!(extent >= 0.0)) throw std::invalid_argument("make_trajectory: extent must be >= 0");
  const Vec3 start = scene.camera_origin;
  if (!scene.camera_valid(start, kWallMargin)) {
    throw std::invalid_argument("make_trajectory: scene camera origin is not a valid placement");
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    const Vec3 dir = random_horizontal(rng);
    std::vector<Pose> poses;
    bool ok = true;
    for (int i = 0; i < n_frames && ok; ++i) {
      const double s = n_frames == 1 ? 0.0 : extent * i / (n_frames - 1);
      const Vec3 p = start + s * dir;
      ok = scene.camera_valid(p, kWallMargin);
      poses.push_back(Pose::from_translation(p));
    }
    if (ok) return poses;
  }
  throw std::runtime_error("make_trajectory: no valid placement after " +
                           std::to_string(kMaxPlacementAttempts) + " attempts");
}

TestPair make_test_pair(const SyntheticScene& scene, double baseline, std::uint64_t seed,
                        const ErpGrid& grid) {
  const auto [a, b] = make_pair_poses(scene, baseline, seed);
  return {{a, b}, {render_gt(scene, a, grid), render_gt(scene, b, grid)}};
}

}  // namespace panosplat
