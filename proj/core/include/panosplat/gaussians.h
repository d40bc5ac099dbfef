#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Geometry>

#include "panosplat/pano_image.h"
#include "panosplat/sphere_geom.h"
#include "panosplat/sweep.h"

namespace panosplat {

/// One 3D Gaussian. Covariance is R diag(scale)^2 R^T with R from `rotation`.
struct Splat {
  Vec3 center = Vec3::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();  // unit, (w, x, y, z)
  Vec3 scale = Vec3::Ones();                                      // linear, meters
  double opacity = 1.0;
  Vec3 color = Vec3::Zero();  // degree-0 rgb

  Mat3 covariance() const;
};

struct SplatSource {
  int view = -1;  // -1 when unknown (e.g. loaded from disk)
  int x = -1;
  int y = -1;
};

struct SplatSet {
  std::vector<Splat> splats;
  std::vector<SplatSource> sources;  // parallel to splats

  std::size_t size() const { return splats.size(); }
  bool empty() const { return splats.empty(); }
  void push_back(const Splat& s, SplatSource src = {}) {
    splats.push_back(s);
    sources.push_back(src);
  }
};

/// World-space surface point of every valid depth pixel (nullopt for invalid ones).
std::vector<std::optional<Vec3>> lift_centers(const DepthMap& depth, const Pose& pose);

struct DecodeConfig {
  double scale_multiplier = 1.0;
  double opacity_floor = 0.01;
};

/// Rotation whose columns are the unit longitude tangent, the unit latitude
/// tangent and the outward radial direction at (theta, phi).
Mat3 tangent_frame(double theta, double phi);

/// One splat per valid pixel, in row-major order.
SplatSet decode_splats(const ErpImage& img, const DepthResult& depth_result, const Pose& pose,
                       const DecodeConfig& config = {}, int view_index = 0);

/// Concatenation, preserving order and provenance.
SplatSet merge(std::span<const SplatSet> sets);

/// "SPLT": magic, u32 count, then per splat 14 little-endian f32:
/// center xyz, quaternion wxyz, scale xyz, opacity, rgb.
void write_splats(const std::filesystem::path& path, const SplatSet& set);
SplatSet read_splats(const std::filesystem::path& path);
std::vector<unsigned char> encode_splats(const SplatSet& set);
SplatSet decode_splat_bytes(std::span<const unsigned char> bytes);

}  // namespace panosplat
