#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "panosplat/sphere_geom.h"

namespace panosplat {

/// Plain row-major multi-channel raster for perspective images (cube faces,
/// pinhole renders). Pixel (x, y) channel c lives at ((y * width) + x) * channels + c.
struct Raster {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  Raster() = default;
  Raster(int w, int h, int c, float fill = 0.0f);

  float& at(int x, int y, int c) { return data[index(x, y, c)]; }
  float at(int x, int y, int c) const { return data[index(x, y, c)]; }
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
};

/// Equirectangular raster. Values must be finite; color images live in [0, 1].
class ErpImage {
 public:
  ErpImage(const ErpGrid& grid, int channels, float fill = 0.0f);
  /// Throws std::invalid_argument on a length mismatch or non-finite values.
  ErpImage(const ErpGrid& grid, int channels, std::vector<float> data);

  const ErpGrid& grid() const { return grid_; }
  int width() const { return grid_.width(); }
  int height() const { return grid_.height(); }
  int channels() const { return channels_; }

  float& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  float at(int x, int y, int c) const { return data_[index(x, y, c)]; }
  std::span<float> pixel(int x, int y) {
    return {data_.data() + index(x, y, 0), static_cast<std::size_t>(channels_)};
  }
  std::span<const float> pixel(int x, int y) const {
    return {data_.data() + index(x, y, 0), static_cast<std::size_t>(channels_)};
  }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * grid_.width() + x) * channels_ + c;
  }

 private:
  ErpGrid grid_;
  int channels_;
  std::vector<float> data_;
};

/// Spherical (radial) depth per pixel in meters; 0 marks an invalid pixel.
struct DepthMap {
  ErpGrid grid;
  std::vector<float> data;

  explicit DepthMap(const ErpGrid& g, float fill = 0.0f) : grid(g), data(g.pixel_count(), fill) {}
  DepthMap(const ErpGrid& g, std::vector<float> values);

  float& at(int x, int y) { return data[static_cast<std::size_t>(y) * grid.width() + x]; }
  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * grid.width() + x]; }
  static bool valid(float d) { return d > 0.0f && std::isfinite(d); }
  std::size_t valid_count() const;

  ErpImage as_image() const;
  static DepthMap from_image(const ErpImage& img);
};

/// Bilinear lookup at continuous (u, v), pixel centers at k + 0.5. Wraps across the
/// longitude seam and clamps at the poles. `out` must hold img.channels() values.
void sample_bilinear(const ErpImage& img, double u, double v, std::span<double> out);
std::vector<double> sample_bilinear(const ErpImage& img, double u, double v);

/// Cube faces, in storage order. Each face is a 90 degree pinhole view whose camera
/// frame (x right, y down, z forward) maps to the panorama frame by face_rotation().
enum class CubeFace : int { kFront = 0, kRight, kBack, kLeft, kUp, kDown };
inline constexpr int kCubeFaceCount = 6;

const Mat3& face_rotation(CubeFace face);
/// Panorama-frame direction (not normalized) through face tangent coords (a, b) in [-1, 1].
Vec3 face_direction(CubeFace face, double a, double b);

struct FaceHit {
  CubeFace face;
  double a;
  double b;
};
/// Face with the dominant |axis component|, and the tangent coords of `d` on it.
FaceHit direction_to_face(const Vec3& d);

struct CubeMap {
  int face_size = 0;
  int channels = 0;
  std::array<Raster, kCubeFaceCount> faces;

  CubeMap(int face_size, int channels, float fill = 0.0f);

  Raster& face(CubeFace f) { return faces[static_cast<int>(f)]; }
  const Raster& face(CubeFace f) const { return faces[static_cast<int>(f)]; }
};

/// Renders one face with `padding` extra pixels on every side (same pixel pitch).
Raster erp_to_face(const ErpImage& img, CubeFace face, int face_size, int padding = 0);
CubeMap erp_to_cubemap(const ErpImage& img, int face_size);
ErpImage cubemap_to_erp(const CubeMap& cm, const ErpGrid& grid);

/// Bilinear lookup on a raster at continuous pixel coordinates, clamped at edges.
void sample_raster(const Raster& r, double px, double py, std::span<double> out);

/// Box-filter downsampling by an integer factor that divides both dimensions.
ErpImage box_downsample(const ErpImage& img, int factor);
Raster box_downsample(const Raster& img, int factor);

/// Bilinear resampling onto another grid (pixel centers aligned, seam wrapped).
ErpImage resample(const ErpImage& img, const ErpGrid& grid);

}  // namespace panosplat
