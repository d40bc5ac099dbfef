#include "panosplat/sphere_geom.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace panosplat {

ErpGrid::ErpGrid(int width, int height) : width_(width), height_(height) {
  if (height < 2 || height % 2 != 0) {
    throw std::invalid_argument("ErpGrid: height must be even and >= 2, got " +
                                std::to_string(height));
  }
  if (width != 2 * height) {
    throw std::invalid_argument("ErpGrid: width must equal 2 * height, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
}

double wrap_angle(double theta) {
  if (theta > -kPi && theta <= kPi) return theta;
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t <= 0.0) t += 2.0 * kPi;
  return t - kPi;
}

SphericalCoord pixel_to_spherical(double u, double v, const ErpGrid& grid) {
  const double h = grid.height();
  if (!(v >= 0.0 && v <= h)) {
    throw std::domain_error("pixel_to_spherical: v=" + std::to_string(v) +
                            " outside [0, " + std::to_string(grid.height()) + "]");
  }
  SphericalCoord s;
  s.theta = wrap_angle((0.5 - u / grid.width()) * 2.0 * kPi);
  s.phi = (0.5 - v / h) * kPi;
  s.r = 1.0;
  return s;
}

std::pair<double, double> spherical_to_pixel(const SphericalCoord& s, const ErpGrid& grid) {
  const double w = grid.width();
  const double h = grid.height();
  double u = (0.5 - s.theta / (2.0 * kPi)) * w;
  u = std::fmod(u, w);
  if (u < 0.0) u += w;
  if (u >= w) u -= w;
  const double v = std::clamp((0.5 - s.phi / kPi) * h, 0.0, h);
  return {u, v};
}

Vec3 spherical_to_cartesian(const SphericalCoord& s) {
  const double cos_phi = std::cos(s.phi);
  return {s.r * cos_phi * std::sin(s.theta), s.r * std::sin(s.phi),
          s.r * cos_phi * std::cos(s.theta)};
}

SphericalCoord cartesian_to_spherical(const Vec3& p) {
  const double r = p.norm();
  if (!(r > 0.0)) throw std::domain_error("cartesian_to_spherical: zero vector");
  SphericalCoord s;
  s.r = r;
  const double horizontal = std::hypot(p.x(), p.z());
  s.phi = std::atan2(p.y(), horizontal);
  s.theta = horizontal == 0.0 ? 0.0 : wrap_angle(std::atan2(p.x(), p.z()));
  return s;
}

Vec3 pixel_direction(int x, int y, const ErpGrid& grid) {
  return spherical_to_cartesian(pixel_to_spherical(x + 0.5, y + 0.5, grid));
}

Pose::Pose(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!is_rigid(rotation)) throw std::invalid_argument("Pose: rotation is not orthonormal with det +1");
  if (!translation.allFinite()) throw std::invalid_argument("Pose: non-finite translation");
}

Pose Pose::from_row_major(const std::array<double, 16>& m) {
  for (double x : m) {
    if (!std::isfinite(x)) throw std::invalid_argument("Pose: non-finite matrix entry");
  }
  if (std::abs(m[12]) > kRigidTolerance || std::abs(m[13]) > kRigidTolerance ||
      std::abs(m[14]) > kRigidTolerance || std::abs(m[15] - 1.0) > kRigidTolerance) {
    throw std::invalid_argument("Pose: last row must be (0, 0, 0, 1)");
  }
  Mat3 r;
  r << m[0], m[1], m[2], m[4], m[5], m[6], m[8], m[9], m[10];
  return Pose(r, Vec3(m[3], m[7], m[11]));
}

Pose Pose::compose(const Pose& other) const {
  return Pose(rotation_ * other.rotation_, rotation_ * other.translation_ + translation_,
              Unchecked{});
}

Pose Pose::inverse() const {
  const Mat3 rt = rotation_.transpose();
  return Pose(rt, -(rt * translation_), Unchecked{});
}

std::array<double, 16> Pose::to_row_major() const {
  const Mat3& r = rotation_;
  const Vec3& t = translation_;
  return {r(0, 0), r(0, 1), r(0, 2), t.x(), r(1, 0), r(1, 1), r(1, 2), t.y(),
          r(2, 0), r(2, 1), r(2, 2), t.z(), 0.0,     0.0,     0.0,     1.0};
}

bool Pose::is_rigid(const Mat3& rotation, double tol) {
  if (!rotation.allFinite()) return false;
  const double ortho = (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

Pose relative(const Pose& src, const Pose& dst) { return dst.inverse().compose(src); }

}  // namespace panosplat
