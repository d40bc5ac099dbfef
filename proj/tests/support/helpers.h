#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Geometry>

#include "panosplat/features.h"
#include "panosplat/pano_image.h"
#include "panosplat/sphere_geom.h"

namespace testing_support {

inline panosplat::Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline panosplat::Pose random_pose(std::mt19937_64& rng, double extent = 2.0) {
  std::uniform_real_distribution<double> u(-extent, extent);
  return panosplat::Pose(random_rotation(rng), panosplat::Vec3(u(rng), u(rng), u(rng)));
}

inline panosplat::ErpImage random_image(const panosplat::ErpGrid& grid, int channels, std::mt19937_64& rng) {
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  panosplat::ErpImage img(grid, channels);
  for (float& v : img.data()) v = u(rng);
  return img;
}

// Sum of a few smooth spherical waves, values in [0, 1].
inline panosplat::ErpImage smooth_image(const panosplat::ErpGrid& grid, int channels = 3) {
  panosplat::ErpImage img(grid, channels);
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const panosplat::Vec3 d = panosplat::pixel_direction(x, y, grid);
      for (int k = 0; k < channels; ++k) {
        const double v = 0.5 + 0.2 * std::sin(2.0 * d.x() + 1.3 * k) * std::cos(1.5 * d.y()) +
                         0.15 * std::cos(2.5 * d.z() - 0.7 * k);
        img.at(x, y, k) = static_cast<float>(v);
      }
    }
  }
  return img;
}

inline panosplat::FeatureMap random_features(const panosplat::ErpGrid& g, int c, std::mt19937_64& rng) {
  std::normal_distribution<float> n(0.0f, 1.0f);
  panosplat::FeatureMap f{panosplat::ErpImage(g, c), false};
  for (float& v : f.raster.data()) v = n(rng);
  panosplat::normalize_features(f);
  return f;
}

// Sphere of radius `radius` centered at the origin, textured by a smooth
// function of the surface direction, seen from a camera inside it.
inline panosplat::ErpImage render_textured_sphere(const panosplat::ErpGrid& g, const panosplat::Pose& cam,
                                                  double radius) {
  panosplat::ErpImage img(g, 3);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const panosplat::Vec3 d = cam.rotation() * panosplat::pixel_direction(x, y, g);
      const panosplat::Vec3 o = cam.translation();
      const double b = o.dot(d);
      const double t = -b + std::sqrt(b * b - (o.squaredNorm() - radius * radius));
      const panosplat::Vec3 p = (o + t * d) / radius;
      const double v =
          0.5 + 0.2 * std::sin(9.0 * p.x() + 4.0 * p.y()) + 0.2 * std::sin(7.0 * p.z() - 5.0 * p.y() + 1.0);
      for (int k = 0; k < 3; ++k) img.at(x, y, k) = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return img;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("panosplat_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Pixels whose 9x9 luminance neighborhood has a standard deviation above 0.01.
inline std::vector<unsigned char> textured_mask(const panosplat::ErpImage& img) {
  const int w = img.width(), h = img.height();
  std::vector<double> lum(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      lum[static_cast<std::size_t>(y) * w + x] =
          0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
    }
  }
  std::vector<unsigned char> mask(lum.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0, s2 = 0.0;
      int n = 0;
      for (int dy = -4; dy <= 4; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        for (int dx = -4; dx <= 4; ++dx) {
          const double v = lum[static_cast<std::size_t>(yy) * w + ((x + dx + w) % w)];
          s += v;
          s2 += v * v;
          ++n;
        }
      }
      const double var = s2 / n - (s / n) * (s / n);
      mask[static_cast<std::size_t>(y) * w + x] = std::sqrt(std::max(var, 0.0)) > 0.01;
    }
  }
  return mask;
}

}  // namespace testing_support
