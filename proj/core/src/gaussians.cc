#include "panosplat/gaussians.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "panosplat/image_io.h"
#include "panosplat/parallel.h"

namespace panosplat {

Mat3 Splat::covariance() const {
  const Mat3 r = rotation.normalized().toRotationMatrix();
  return r * scale.cwiseProduct(scale).asDiagonal() * r.transpose();
}

std::vector<std::optional<Vec3>> lift_centers(const DepthMap& depth, const Pose& pose) {
  const ErpGrid& grid = depth.grid;
  std::vector<std::optional<Vec3>> out(grid.pixel_count());
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const float d = depth.at(x, y);
      if (!DepthMap::valid(d)) continue;
      SphericalCoord s = pixel_to_spherical(x + 0.5, y + 0.5, grid);
      s.r = d;
      out[static_cast<std::size_t>(y) * grid.width() + x] = pose.transform_point(spherical_to_cartesian(s));
    }
  }
  return out;
}

Mat3 tangent_frame(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  Mat3 f;
  f.col(0) = Vec3(ct, 0.0, -st);
  f.col(1) = Vec3(-sp * st, cp, -sp * ct);
  f.col(2) = Vec3(cp * st, sp, cp * ct);
  return f;
}

SplatSet decode_splats(const ErpImage& img, const DepthResult& depth_result, const Pose& pose,
                       const DecodeConfig& config, int view_index) {
  const ErpGrid& grid = img.grid();
  if (depth_result.depth.grid != grid || depth_result.confidence.grid() != grid) {
    throw std::invalid_argument("decode_splats: image, depth and confidence grids differ");
  }
  if (img.channels() != 3) throw std::invalid_argument("decode_splats: expected an rgb image");
  const double sigma = config.scale_multiplier;
  const double step_theta = grid.delta_theta();
  const double step_phi = grid.delta_phi();

  std::vector<Splat> dense(grid.pixel_count());
  std::vector<unsigned char> valid(grid.pixel_count(), 0);
  parallel_for(0, grid.height(), [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    for (int x = 0; x < grid.width(); ++x) {
      const float r = depth_result.depth.at(x, y);
      if (!DepthMap::valid(r)) continue;
      const std::size_t i = static_cast<std::size_t>(y) * grid.width() + x;
      SphericalCoord s = pixel_to_spherical(x + 0.5, y + 0.5, grid);
      s.r = r;
      const Mat3 frame = pose.rotation() * tangent_frame(s.theta, s.phi);
      Splat& sp = dense[i];
      sp.center = pose.transform_point(spherical_to_cartesian(s));
      sp.rotation = Eigen::Quaterniond(frame).normalized();
      sp.scale = sigma * Vec3(r * step_theta * std::max(std::cos(s.phi), 0.05), r * step_phi,
                              0.1 * r * step_phi);
      sp.opacity = std::clamp(static_cast<double>(depth_result.confidence.at(x, y, 0)),
                              config.opacity_floor, 1.0);
      sp.color = Vec3(img.at(x, y, 0), img.at(x, y, 1), img.at(x, y, 2));
      valid[i] = 1;
    }
  });
  SplatSet set;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * grid.width() + x;
      if (valid[i]) set.push_back(dense[i], {view_index, x, y});
    }
  }
  return set;
}

SplatSet merge(std::span<const SplatSet> sets) {
  SplatSet out;
  std::size_t total = 0;
  for (const SplatSet& s : sets) total += s.size();
  out.splats.reserve(total);
  out.sources.reserve(total);
  for (const SplatSet& s : sets) {
    out.splats.insert(out.splats.end(), s.splats.begin(), s.splats.end());
    out.sources.insert(out.sources.end(), s.sources.begin(), s.sources.end());
  }
  return out;
}

namespace {

constexpr int kFloatsPerSplat = 14;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<unsigned char>(v >> (8 * k)));
}

void put_f32(std::vector<unsigned char>& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f32(const unsigned char* b) { return std::bit_cast<float>(get_u32(b)); }

}  // namespace

std::vector<unsigned char> encode_splats(const SplatSet& set) {
  std::vector<unsigned char> out;
  out.reserve(8 + set.size() * kFloatsPerSplat * 4);
  out.insert(out.end(), {'S', 'P', 'L', 'T'});
  put_u32(out, static_cast<std::uint32_t>(set.size()));
  for (const Splat& s : set.splats) {
    for (int k = 0; k < 3; ++k) put_f32(out, s.center[k]);
    put_f32(out, s.rotation.w());
    put_f32(out, s.rotation.x());
    put_f32(out, s.rotation.y());
    put_f32(out, s.rotation.z());
    for (int k = 0; k < 3; ++k) put_f32(out, s.scale[k]);
    put_f32(out, s.opacity);
    for (int k = 0; k < 3; ++k) put_f32(out, s.color[k]);
  }
  return out;
}

SplatSet decode_splat_bytes(std::span<const unsigned char> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), "SPLT", 4) != 0) {
    throw IoError("missing SPLT header");
  }
  const std::uint32_t count = get_u32(bytes.data() + 4);
  const std::size_t expected = 8 + static_cast<std::size_t>(count) * kFloatsPerSplat * 4;
  if (bytes.size() != expected) {
    throw IoError("SPLT size mismatch: header says " + std::to_string(count) + " splats (" +
                  std::to_string(expected) + " bytes), got " + std::to_string(bytes.size()) + " bytes");
  }
  SplatSet set;
  set.splats.resize(count);
  set.sources.assign(count, SplatSource{});
  const unsigned char* p = bytes.data() + 8;
  for (std::uint32_t i = 0; i < count; ++i, p += kFloatsPerSplat * 4) {
    Splat& s = set.splats[i];
    s.center = Vec3(get_f32(p), get_f32(p + 4), get_f32(p + 8));
    s.rotation = Eigen::Quaterniond(get_f32(p + 12), get_f32(p + 16), get_f32(p + 20), get_f32(p + 24));
    s.scale = Vec3(get_f32(p + 28), get_f32(p + 32), get_f32(p + 36));
    s.opacity = get_f32(p + 40);
    s.color = Vec3(get_f32(p + 44), get_f32(p + 48), get_f32(p + 52));
  }
  return set;
}

void write_splats(const std::filesystem::path& path, const SplatSet& set) {
  const auto bytes = encode_splats(set);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

SplatSet read_splats(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_splat_bytes(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace panosplat
