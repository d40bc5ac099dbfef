#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "panosplat/gaussians.h"
#include "panosplat/pano_image.h"
#include "panosplat/sphere_geom.h"

namespace panosplat {

/// OpenCV-style pinhole: x right, y down, z forward; pose is camera-to-world.
/// Pixel (i, j) covers [i, i + 1) x [j, j + 1), its center is (i + 0.5, j + 0.5).
struct PinholeCamera {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.5;
  double cy = 0.5;
  int width = 1;
  int height = 1;
  Pose pose;

  /// Throws std::invalid_argument unless fx, fy > 0 and the principal point is inside the image.
  void validate() const;
};

inline constexpr double kNearClip = 0.05;       // meters, view-space z
inline constexpr double kCovarianceDilation = 0.3;  // pixels^2 added to the 2D covariance diagonal
inline constexpr double kMaxAlpha = 0.999;
inline constexpr double kMinAlpha = 1.0 / 255.0;
inline constexpr double kMinTransmittance = 1e-4;
inline constexpr double kCutoffSigma = 3.0;
inline constexpr int kTileSize = 16;

struct Projected2DGaussian {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
  Eigen::Matrix2d conic;  // cov inverse
  double view_z = 0.0;
  double opacity = 0.0;
  Vec3 color = Vec3::Zero();
  double radius = 0.0;  // 3-sigma extent in pixels along the major axis
  Mat3 precision;        // inverse 3D covariance in camera coordinates
  Vec3 precision_mean;   // precision * camera-space center
  double depth_min = 0.0;
  double depth_max = 0.0;

  /// View z of the 3D density peak along the ray through normalized image point
  /// (u, v, 1), clamped to the Gaussian's 3-sigma depth range.
  double ray_depth(double u, double v) const;
};

/// EWA projection. Returns nullopt when the splat lies behind the near clip.
std::optional<Projected2DGaussian> project_gaussian(const Splat& splat, const PinholeCamera& cam);

struct RenderOutput {
  int width = 0;
  int height = 0;
  std::vector<float> color;  // rgb, composited over the background
  std::vector<float> alpha;  // 1 - final transmittance
  std::vector<float> depth;  // alpha-normalized expected ray_depth; 0 where alpha == 0

  Raster color_raster() const;
};

/// Tiled front-to-back rasterizer (16x16 tiles, global z order with index tie-break).
RenderOutput rasterize(const SplatSet& splats, const PinholeCamera& cam, const Vec3& background);

/// Oracle: same per-pixel math, every pixel walks every sorted Gaussian.
RenderOutput rasterize_reference(const SplatSet& splats, const PinholeCamera& cam, const Vec3& background);

struct PanoramaRender {
  ErpImage image;
  DepthMap depth;  // radial depth
};

/// Renders six padded 90 degree faces at `pose`, crops the margins and stitches.
PanoramaRender render_panorama(const SplatSet& splats, const Pose& pose, const ErpGrid& grid,
                               const Vec3& background);

/// Upright square pinhole view looking down the pose's +z axis (same orientation as
/// the front cube face).
RenderOutput render_pinhole(const SplatSet& splats, const Pose& pose, int width, double fov_deg,
                            const Vec3& background);

}  // namespace panosplat
