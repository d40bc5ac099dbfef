#pragma once

#include <array>
#include <numbers>
#include <utility>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace panosplat {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;

/// Point or direction on the unit sphere, camera frame.
///   theta: longitude in (-pi, pi], 0 looks down +z, pi/2 looks down +x.
///   phi:   latitude in [-pi/2, pi/2], positive towards +y (up).
///   r:     radial distance; 1 for pure directions.
struct SphericalCoord {
  double theta = 0.0;
  double phi = 0.0;
  double r = 1.0;
};

/// Equirectangular pixel lattice. Full sphere only, so width == 2 * height.
class ErpGrid {
 public:
  ErpGrid(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  /// Angular size of one pixel along a row / column, radians.
  double delta_theta() const { return 2.0 * kPi / width_; }
  double delta_phi() const { return kPi / height_; }

  friend bool operator==(const ErpGrid&, const ErpGrid&) = default;

 private:
  int width_;
  int height_;
};

/// Wraps any angle into (-pi, pi].
double wrap_angle(double theta);

/// Continuous pixel (u, v) -> direction. Integer pixel k has its center at k + 0.5.
/// Throws std::domain_error when v lies beyond the poles.
SphericalCoord pixel_to_spherical(double u, double v, const ErpGrid& grid);

/// Inverse of pixel_to_spherical; u wraps into [0, W), v clamps into [0, H].
std::pair<double, double> spherical_to_pixel(const SphericalCoord& s, const ErpGrid& grid);

Vec3 spherical_to_cartesian(const SphericalCoord& s);

/// theta := 0 on the poles. Throws std::domain_error on the zero vector.
SphericalCoord cartesian_to_spherical(const Vec3& p);

/// Unit ray through the center of pixel (x, y).
Vec3 pixel_direction(int x, int y, const ErpGrid& grid);

/// Rigid camera-to-world transform, p_world = R * p_camera + t.
class Pose {
 public:
  static constexpr double kRigidTolerance = 1e-9;

  Pose() = default;
  /// Throws std::invalid_argument unless rotation is orthonormal with det +1.
  Pose(const Mat3& rotation, const Vec3& translation);

  static Pose identity() { return Pose(); }
  static Pose from_translation(const Vec3& t) { return Pose(Mat3::Identity(), t); }
  /// 4x4 row-major matrix; the last row must be (0, 0, 0, 1).
  static Pose from_row_major(const std::array<double, 16>& m);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 transform_point(const Vec3& p) const { return rotation_ * p + translation_; }
  Vec3 transform_direction(const Vec3& d) const { return rotation_ * d; }

  /// (a * b)(p) = a(b(p)).
  Pose compose(const Pose& other) const;
  Pose inverse() const;
  Pose operator*(const Pose& other) const { return compose(other); }

  std::array<double, 16> to_row_major() const;

  static bool is_rigid(const Mat3& rotation, double tol = kRigidTolerance);

 private:
  struct Unchecked {};
  Pose(const Mat3& rotation, const Vec3& translation, Unchecked)
      : rotation_(rotation), translation_(translation) {}

  Mat3 rotation_ = Mat3::Identity();
  Vec3 translation_ = Vec3::Zero();
};

inline Vec3 transform_point(const Pose& pose, const Vec3& p) { return pose.transform_point(p); }
inline Pose compose(const Pose& a, const Pose& b) { return a.compose(b); }
inline Pose invert(const Pose& p) { return p.inverse(); }

/// Maps camera-src coordinates into camera-dst coordinates: dst^-1 * src.
Pose relative(const Pose& src, const Pose& dst);

}  // namespace panosplat
