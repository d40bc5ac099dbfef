#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "panosplat/pano_image.h"
#include "panosplat/sphere_geom.h"

namespace panosplat {

/// Procedural surface texture evaluated on 2D surface coordinates (meters).
struct Texture {
  enum class Kind { kConstant, kCheckerboard, kSineGrating };
  Kind kind = Kind::kConstant;
  double param = 0.25;  // checkerboard period (m) or grating frequency (cycles / m)
  Vec3 color_a = Vec3::Constant(0.5);
  Vec3 color_b = Vec3::Constant(0.5);

  static Texture constant(const Vec3& c) { return {Kind::kConstant, 0.0, c, c}; }
  static Texture checkerboard(double period, const Vec3& a, const Vec3& b) {
    return {Kind::kCheckerboard, period, a, b};
  }
  /// Band-limited pattern: six sine gratings with frequencies spread over one octave
  /// starting at `frequency`, at golden-angle orientations, blending a -> b.
  static Texture sine_grating(double frequency, const Vec3& a, const Vec3& b) {
    return {Kind::kSineGrating, frequency, a, b};
  }

  Vec3 eval(double s, double t) const;
};

inline constexpr double kDefaultCheckerPeriod = 0.25;

struct SphereObject {
  Vec3 center = Vec3::Zero();
  double radius = 0.5;
  Texture texture;
};

/// Axis-aligned box room centered at the origin, plus optional inner spheres.
/// Walls are indexed +x, -x, +y (ceiling), -y (floor), +z, -z.
struct SyntheticScene {
  Vec3 size = Vec3(4.0, 3.0, 4.0);
  std::array<Texture, 6> walls;
  std::vector<SphereObject> spheres;
  Vec3 camera_origin = Vec3::Zero();  // default first camera position

  /// Strictly inside the box (by `margin`) and outside every sphere.
  bool camera_valid(const Vec3& p, double margin = 0.0) const;
};

/// Named presets: "room" (textured box), "room_sphere" (box + one sphere),
/// "checker" (checkerboard walls), "constant" (untextured box).
SyntheticScene make_scene(const std::string& preset);
std::vector<std::string> scene_presets();

struct RayHit {
  double distance;
  Vec3 color;
};

/// Nearest surface along a unit ray from inside the room.
RayHit trace(const SyntheticScene& scene, const Vec3& origin, const Vec3& dir);

struct GroundTruthView {
  ErpImage image;
  DepthMap depth;
};

/// Throws std::invalid_argument when the camera is outside the room or inside a sphere.
GroundTruthView render_gt(const SyntheticScene& scene, const Pose& pose, const ErpGrid& grid);

struct TestPair {
  std::array<Pose, 2> poses;
  std::array<GroundTruthView, 2> views;
};

/// Second camera = first translated by `baseline` along a seeded random horizontal
/// direction; rotations are identity.
std::pair<Pose, Pose> make_pair_poses(const SyntheticScene& scene, double baseline, std::uint64_t seed);
TestPair make_test_pair(const SyntheticScene& scene, double baseline, std::uint64_t seed,
                        const ErpGrid& grid);

/// n frames evenly spaced on a straight seeded path of total length `extent`.
std::vector<Pose> make_trajectory(const SyntheticScene& scene, int n_frames, double extent,
                                  std::uint64_t seed);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit generator.
double unit_uniform(std::uint64_t bits);

}  // namespace panosplat
