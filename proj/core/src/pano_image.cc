#include "panosplat/pano_image.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "panosplat/parallel.h"

namespace panosplat {

Raster::Raster(int w, int h, int c, float fill)
    : width(w), height(h), channels(c),
      data(static_cast<std::size_t>(w) * h * c, fill) {
  if (w <= 0 || h <= 0 || c <= 0) throw std::invalid_argument("Raster: non-positive dimensions");
}

ErpImage::ErpImage(const ErpGrid& grid, int channels, float fill)
    : grid_(grid), channels_(channels) {
  if (channels < 1) throw std::invalid_argument("ErpImage: channels must be >= 1");
  if (!std::isfinite(fill)) throw std::invalid_argument("ErpImage: non-finite fill value");
  data_.assign(grid.pixel_count() * channels, fill);
}

ErpImage::ErpImage(const ErpGrid& grid, int channels, std::vector<float> data)
    : grid_(grid), channels_(channels), data_(std::move(data)) {
  if (channels < 1) throw std::invalid_argument("ErpImage: channels must be >= 1");
  if (data_.size() != grid.pixel_count() * channels) {
    throw std::invalid_argument("ErpImage: expected " +
                                std::to_string(grid.pixel_count() * channels) +
                                " values, got " + std::to_string(data_.size()));
  }
  for (float x : data_) {
    if (!std::isfinite(x)) throw std::invalid_argument("ErpImage: non-finite value");
  }
}

DepthMap::DepthMap(const ErpGrid& g, std::vector<float> values) : grid(g), data(std::move(values)) {
  if (data.size() != g.pixel_count()) throw std::invalid_argument("DepthMap: size mismatch");
  for (float& d : data) {
    if (!valid(d)) d = 0.0f;
  }
}

std::size_t DepthMap::valid_count() const {
  return static_cast<std::size_t>(std::count_if(data.begin(), data.end(), valid));
}

ErpImage DepthMap::as_image() const { return ErpImage(grid, 1, data); }

DepthMap DepthMap::from_image(const ErpImage& img) {
  if (img.channels() != 1) throw std::invalid_argument("DepthMap: expected a 1-channel raster");
  return DepthMap(img.grid(), img.data());
}

void sample_bilinear(const ErpImage& img, double u, double v, std::span<double> out) {
  const int w = img.width();
  const int h = img.height();
  const int c = img.channels();
  const double x = u - 0.5;
  const double y = std::clamp(v - 0.5, 0.0, static_cast<double>(h - 1));
  const double xf = std::floor(x);
  const double fx = x - xf;
  int x0 = static_cast<int>(std::fmod(xf, static_cast<double>(w)));
  if (x0 < 0) x0 += w;
  const int x1 = x0 + 1 == w ? 0 : x0 + 1;
  const int y0 = std::min(static_cast<int>(y), h - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fy = y - y0;
  const float* p00 = &img.data()[img.index(x0, y0, 0)];
  const float* p10 = &img.data()[img.index(x1, y0, 0)];
  const float* p01 = &img.data()[img.index(x0, y1, 0)];
  const float* p11 = &img.data()[img.index(x1, y1, 0)];
  const double w00 = (1.0 - fx) * (1.0 - fy);
  const double w10 = fx * (1.0 - fy);
  const double w01 = (1.0 - fx) * fy;
  const double w11 = fx * fy;
  for (int k = 0; k < c; ++k) {
    out[k] = w00 * p00[k] + w10 * p10[k] + w01 * p01[k] + w11 * p11[k];
  }
}

std::vector<double> sample_bilinear(const ErpImage& img, double u, double v) {
  std::vector<double> out(img.channels());
  sample_bilinear(img, u, v, out);
  return out;
}

namespace {

Mat3 make_face_rotation(const Vec3& x_axis, const Vec3& y_axis, const Vec3& z_axis) {
  Mat3 r;
  r.col(0) = x_axis;
  r.col(1) = y_axis;
  r.col(2) = z_axis;
  return r;
}

const std::array<Mat3, kCubeFaceCount>& face_rotations() {
  static const std::array<Mat3, kCubeFaceCount> rotations = {
      make_face_rotation({-1, 0, 0}, {0, -1, 0}, {0, 0, 1}),   // front  +z
      make_face_rotation({0, 0, 1}, {0, -1, 0}, {1, 0, 0}),    // right  +x
      make_face_rotation({1, 0, 0}, {0, -1, 0}, {0, 0, -1}),   // back   -z
      make_face_rotation({0, 0, -1}, {0, -1, 0}, {-1, 0, 0}),  // left   -x
      make_face_rotation({-1, 0, 0}, {0, 0, 1}, {0, 1, 0}),    // up     +y
      make_face_rotation({-1, 0, 0}, {0, 0, -1}, {0, -1, 0}),  // down   -y
  };
  return rotations;
}

}  // namespace

const Mat3& face_rotation(CubeFace face) { return face_rotations()[static_cast<int>(face)]; }

Vec3 face_direction(CubeFace face, double a, double b) {
  return face_rotation(face) * Vec3(a, b, 1.0);
}

FaceHit direction_to_face(const Vec3& d) {
  const double ax = std::abs(d.x());
  const double ay = std::abs(d.y());
  const double az = std::abs(d.z());
  CubeFace face;
  if (az >= ax && az >= ay) {
    face = d.z() >= 0.0 ? CubeFace::kFront : CubeFace::kBack;
  } else if (ax >= ay) {
    face = d.x() >= 0.0 ? CubeFace::kRight : CubeFace::kLeft;
  } else {
    face = d.y() >= 0.0 ? CubeFace::kUp : CubeFace::kDown;
  }
  const Vec3 q = face_rotation(face).transpose() * d;
  return {face, q.x() / q.z(), q.y() / q.z()};
}

CubeMap::CubeMap(int size, int ch, float fill) : face_size(size), channels(ch) {
  if (size < 2) throw std::invalid_argument("CubeMap: face_size must be >= 2");
  for (auto& f : faces) f = Raster(size, size, ch, fill);
}

Raster erp_to_face(const ErpImage& img, CubeFace face, int face_size, int padding) {
  if (face_size < 2) throw std::invalid_argument("erp_to_face: face_size must be >= 2");
  if (padding < 0) throw std::invalid_argument("erp_to_face: negative padding");
  const int m = face_size + 2 * padding;
  const int c = img.channels();
  Raster out(m, m, c);
  const double half = 0.5 * face_size;
  parallel_for(0, m, [&](std::int64_t j) {
    std::vector<double> px(c);
    const double b = (static_cast<double>(j) - padding + 0.5) / half - 1.0;
    for (int i = 0; i < m; ++i) {
      const double a = (i - padding + 0.5) / half - 1.0;
      const auto [u, v] = spherical_to_pixel(cartesian_to_spherical(face_direction(face, a, b)),
                                             img.grid());
      sample_bilinear(img, u, v, px);
      for (int k = 0; k < c; ++k) out.at(i, static_cast<int>(j), k) = static_cast<float>(px[k]);
    }
  });
  return out;
}

CubeMap erp_to_cubemap(const ErpImage& img, int face_size) {
  CubeMap cm(face_size, img.channels());
  for (int f = 0; f < kCubeFaceCount; ++f) {
    cm.faces[f] = erp_to_face(img, static_cast<CubeFace>(f), face_size, 0);
  }
  return cm;
}

void sample_raster(const Raster& r, double px, double py, std::span<double> out) {
  const double x = std::clamp(px - 0.5, 0.0, static_cast<double>(r.width - 1));
  const double y = std::clamp(py - 0.5, 0.0, static_cast<double>(r.height - 1));
  const int x0 = std::min(static_cast<int>(x), r.width - 1);
  const int y0 = std::min(static_cast<int>(y), r.height - 1);
  const int x1 = std::min(x0 + 1, r.width - 1);
  const int y1 = std::min(y0 + 1, r.height - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  for (int k = 0; k < r.channels; ++k) {
    out[k] = (1.0 - fx) * (1.0 - fy) * r.at(x0, y0, k) + fx * (1.0 - fy) * r.at(x1, y0, k) +
             (1.0 - fx) * fy * r.at(x0, y1, k) + fx * fy * r.at(x1, y1, k);
  }
}

ErpImage cubemap_to_erp(const CubeMap& cm, const ErpGrid& grid) {
  const int c = cm.channels;
  ErpImage out(grid, c);
  const double half = 0.5 * cm.face_size;
  parallel_for(0, grid.height(), [&](std::int64_t y) {
    std::vector<double> px(c);
    for (int x = 0; x < grid.width(); ++x) {
      const FaceHit hit = direction_to_face(pixel_direction(x, static_cast<int>(y), grid));
      sample_raster(cm.face(hit.face), (hit.a + 1.0) * half, (hit.b + 1.0) * half, px);
      for (int k = 0; k < c; ++k) out.at(x, static_cast<int>(y), k) = static_cast<float>(px[k]);
    }
  });
  return out;
}

ErpImage box_downsample(const ErpImage& img, int factor) {
  if (factor < 1) throw std::invalid_argument("box_downsample: factor must be >= 1");
  if (factor == 1) return img;
  if (img.width() % factor != 0 || img.height() % factor != 0) {
    throw std::invalid_argument("box_downsample: " + std::to_string(img.width()) + "x" +
                                std::to_string(img.height()) + " not divisible by " +
                                std::to_string(factor));
  }
  const ErpGrid grid(img.width() / factor, img.height() / factor);
  const int c = img.channels();
  ErpImage out(grid, c);
  const double norm = 1.0 / (factor * factor);
  parallel_for(0, grid.height(), [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    for (int x = 0; x < grid.width(); ++x) {
      for (int k = 0; k < c; ++k) {
        double acc = 0.0;
        for (int j = 0; j < factor; ++j) {
          for (int i = 0; i < factor; ++i) acc += img.at(x * factor + i, y * factor + j, k);
        }
        out.at(x, y, k) = static_cast<float>(acc * norm);
      }
    }
  });
  return out;
}

Raster box_downsample(const Raster& img, int factor) {
  if (factor < 1) throw std::invalid_argument("box_downsample: factor must be >= 1");
  if (factor == 1) return img;
  if (img.width % factor != 0 || img.height % factor != 0) {
    throw std::invalid_argument("box_downsample: raster not divisible by " + std::to_string(factor));
  }
  Raster out(img.width / factor, img.height / factor, img.channels);
  const double norm = 1.0 / (factor * factor);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      for (int k = 0; k < img.channels; ++k) {
        double acc = 0.0;
        for (int j = 0; j < factor; ++j) {
          for (int i = 0; i < factor; ++i) acc += img.at(x * factor + i, y * factor + j, k);
        }
        out.at(x, y, k) = static_cast<float>(acc * norm);
      }
    }
  }
  return out;
}

ErpImage resample(const ErpImage& img, const ErpGrid& grid) {
  if (grid == img.grid()) return img;
  const int c = img.channels();
  ErpImage out(grid, c);
  const double sx = static_cast<double>(img.width()) / grid.width();
  const double sy = static_cast<double>(img.height()) / grid.height();
  parallel_for(0, grid.height(), [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    std::vector<double> px(c);
    for (int x = 0; x < grid.width(); ++x) {
      sample_bilinear(img, (x + 0.5) * sx, (y + 0.5) * sy, px);
      for (int k = 0; k < c; ++k) out.at(x, y, k) = static_cast<float>(px[k]);
    }
  });
  return out;
}

}  // namespace panosplat
