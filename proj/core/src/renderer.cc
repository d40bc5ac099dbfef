#include "panosplat/renderer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "panosplat/parallel.h"

namespace panosplat {

void PinholeCamera::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("PinholeCamera: focal lengths must be > 0");
  if (width < 1 || height < 1) throw std::invalid_argument("PinholeCamera: empty image");
  if (!(cx >= 0.0 && cx <= width && cy >= 0.0 && cy <= height)) {
    throw std::invalid_argument("PinholeCamera: principal point outside the image");
  }
}

std::optional<Projected2DGaussian> project_gaussian(const Splat& splat, const PinholeCamera& cam) {
  const Pose world_to_cam = cam.pose.inverse();
  const Vec3 t = world_to_cam.transform_point(splat.center);
  if (t.z() <= kNearClip) return std::nullopt;

  // J is evaluated at a bearing clamped to 1.3x the half field of view.
  const double lim_x = 1.3 * std::max(cam.cx, cam.width - cam.cx) / cam.fx;
  const double lim_y = 1.3 * std::max(cam.cy, cam.height - cam.cy) / cam.fy;
  const double jx = std::clamp(t.x() / t.z(), -lim_x, lim_x) * t.z();
  const double jy = std::clamp(t.y() / t.z(), -lim_y, lim_y) * t.z();
  Eigen::Matrix<double, 2, 3> j;
  j << cam.fx / t.z(), 0.0, -cam.fx * jx / (t.z() * t.z()),
      0.0, cam.fy / t.z(), -cam.fy * jy / (t.z() * t.z());

  const Mat3& w = world_to_cam.rotation();
  Projected2DGaussian g;
  g.mean = Eigen::Vector2d(cam.fx * t.x() / t.z() + cam.cx, cam.fy * t.y() / t.z() + cam.cy);
  g.cov = j * w * splat.covariance() * w.transpose() * j.transpose();
  g.cov(0, 1) = g.cov(1, 0) = 0.5 * (g.cov(0, 1) + g.cov(1, 0));
  g.cov(0, 0) += kCovarianceDilation;
  g.cov(1, 1) += kCovarianceDilation;
  const double det = g.cov.determinant();
  if (!(det > 0.0)) return std::nullopt;
  g.conic << g.cov(1, 1) / det, -g.cov(0, 1) / det, -g.cov(1, 0) / det, g.cov(0, 0) / det;
  const double mid = 0.5 * (g.cov(0, 0) + g.cov(1, 1));
  const double lambda_max = mid + std::sqrt(std::max(0.1, mid * mid - det));
  g.radius = std::ceil(kCutoffSigma * std::sqrt(lambda_max));
  g.view_z = t.z();
  const Mat3 r_cam = w * splat.rotation.normalized().toRotationMatrix();
  g.precision = r_cam * splat.scale.cwiseInverse().cwiseAbs2().asDiagonal() * r_cam.transpose();
  g.precision_mean = g.precision * t;
  const double reach = kCutoffSigma * splat.scale.cwiseAbs().maxCoeff();
  g.depth_min = std::max(kNearClip, t.z() - reach);
  g.depth_max = t.z() + reach;
  g.opacity = splat.opacity;
  g.color = splat.color;
  return g;
}

double Projected2DGaussian::ray_depth(double u, double v) const {
  const Vec3 d(u, v, 1.0);
  const double z = d.dot(precision_mean) / d.dot(precision * d);
  return std::clamp(z, depth_min, depth_max);
}

Raster RenderOutput::color_raster() const {
  Raster r(width, height, 3);
  r.data = color;
  return r;
}

namespace {

struct Prepared {
  std::vector<Projected2DGaussian> gaussians;  // front to back
};

Prepared prepare(const SplatSet& splats, const PinholeCamera& cam) {
  cam.validate();
  const std::size_t n = splats.size();
  std::vector<std::optional<Projected2DGaussian>> projected(n);
  parallel_for(0, static_cast<std::int64_t>(n), [&](std::int64_t i) {
    auto g = project_gaussian(splats.splats[i], cam);
    if (!g) return;
    // Drop Gaussians whose 3-sigma box misses the image.
    if (g->mean.x() + g->radius < 0.0 || g->mean.x() - g->radius > cam.width ||
        g->mean.y() + g->radius < 0.0 || g->mean.y() - g->radius > cam.height) {
      return;
    }
    projected[i] = std::move(g);
  });
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (projected[i]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return projected[a]->view_z < projected[b]->view_z;
  });
  Prepared p;
  p.gaussians.reserve(order.size());
  for (std::size_t i : order) p.gaussians.push_back(*projected[i]);
  return p;
}

struct PixelResult {
  Vec3 color;
  double alpha;
  double depth;
};

template <class Indices>
PixelResult blend_pixel(double px, double py, const PinholeCamera& cam,
                        const std::vector<Projected2DGaussian>& gaussians, const Indices& indices,
                        const Vec3& background) {
  const double u = (px - cam.cx) / cam.fx;
  const double v = (py - cam.cy) / cam.fy;
  double transmittance = 1.0;
  Vec3 color = Vec3::Zero();
  double depth = 0.0;
  for (const auto i : indices) {
    const Projected2DGaussian& g = gaussians[i];
    const double dx = px - g.mean.x();
    const double dy = py - g.mean.y();
    const double power = g.conic(0, 0) * dx * dx + 2.0 * g.conic(0, 1) * dx * dy + g.conic(1, 1) * dy * dy;
    if (power > kCutoffSigma * kCutoffSigma) continue;
    const double a = std::min(g.opacity * std::exp(-0.5 * power), kMaxAlpha);
    if (a < kMinAlpha) continue;
    const double w = transmittance * a;
    color += w * g.color;
    depth += w * g.ray_depth(u, v);
    transmittance *= 1.0 - a;
    if (transmittance < kMinTransmittance) break;
  }
  const double alpha = 1.0 - transmittance;
  return {color + transmittance * background, alpha, alpha > 0.0 ? depth / alpha : 0.0};
}

void store(RenderOutput& out, int x, int y, const PixelResult& r) {
  const std::size_t i = static_cast<std::size_t>(y) * out.width + x;
  for (int k = 0; k < 3; ++k) out.color[i * 3 + k] = static_cast<float>(r.color[k]);
  out.alpha[i] = static_cast<float>(r.alpha);
  out.depth[i] = static_cast<float>(r.depth);
}

RenderOutput make_output(const PinholeCamera& cam) {
  RenderOutput out;
  out.width = cam.width;
  out.height = cam.height;
  const std::size_t n = static_cast<std::size_t>(cam.width) * cam.height;
  out.color.assign(n * 3, 0.0f);
  out.alpha.assign(n, 0.0f);
  out.depth.assign(n, 0.0f);
  return out;
}

class IotaRange {
 public:
  explicit IotaRange(std::size_t n) : n_(n) {}
  struct It {
    std::size_t v;
    std::size_t operator*() const { return v; }
    It& operator++() {
      ++v;
      return *this;
    }
    bool operator!=(const It& o) const { return v != o.v; }
  };
  It begin() const { return {0}; }
  It end() const { return {n_}; }

 private:
  std::size_t n_;
};

}  // namespace

RenderOutput rasterize(const SplatSet& splats, const PinholeCamera& cam, const Vec3& background) {
  const Prepared prep = prepare(splats, cam);
  RenderOutput out = make_output(cam);
  const int tiles_x = (cam.width + kTileSize - 1) / kTileSize;
  const int tiles_y = (cam.height + kTileSize - 1) / kTileSize;
  std::vector<std::vector<std::uint32_t>> bins(static_cast<std::size_t>(tiles_x) * tiles_y);
  for (std::size_t i = 0; i < prep.gaussians.size(); ++i) {
    const Projected2DGaussian& g = prep.gaussians[i];
    const int x0 = std::max(0, static_cast<int>(std::floor(g.mean.x() - g.radius)));
    const int x1 = std::min(cam.width - 1, static_cast<int>(std::ceil(g.mean.x() + g.radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(g.mean.y() - g.radius)));
    const int y1 = std::min(cam.height - 1, static_cast<int>(std::ceil(g.mean.y() + g.radius)));
    if (x0 > x1 || y0 > y1) continue;
    for (int ty = y0 / kTileSize; ty <= y1 / kTileSize; ++ty) {
      for (int tx = x0 / kTileSize; tx <= x1 / kTileSize; ++tx) {
        bins[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  parallel_for(0, static_cast<std::int64_t>(bins.size()), [&](std::int64_t t) {
    const int tx = static_cast<int>(t % tiles_x);
    const int ty = static_cast<int>(t / tiles_x);
    const auto& bin = bins[t];
    for (int y = ty * kTileSize; y < std::min(cam.height, (ty + 1) * kTileSize); ++y) {
      for (int x = tx * kTileSize; x < std::min(cam.width, (tx + 1) * kTileSize); ++x) {
        store(out, x, y, blend_pixel(x + 0.5, y + 0.5, cam, prep.gaussians, bin, background));
      }
    }
  });
  return out;
}

RenderOutput rasterize_reference(const SplatSet& splats, const PinholeCamera& cam, const Vec3& background) {
  const Prepared prep = prepare(splats, cam);
  RenderOutput out = make_output(cam);
  const IotaRange all(prep.gaussians.size());
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      store(out, x, y, blend_pixel(x + 0.5, y + 0.5, cam, prep.gaussians, all, background));
    }
  }
  return out;
}

PanoramaRender render_panorama(const SplatSet& splats, const Pose& pose, const ErpGrid& grid,
                               const Vec3& background) {
  const int n = grid.width() / 4;
  if (n < 2) throw std::invalid_argument("render_panorama: grid too small for cube faces");
  const int pad = std::max(1, static_cast<int>(std::lround(0.06 * n)));
  const int padded = n + 2 * pad;
  CubeMap color(n, 3);
  CubeMap depth(n, 1);
  for (int f = 0; f < kCubeFaceCount; ++f) {
    const auto face = static_cast<CubeFace>(f);
    PinholeCamera cam;
    cam.fx = cam.fy = 0.5 * n;
    cam.cx = cam.cy = 0.5 * padded;
    cam.width = cam.height = padded;
    cam.pose = pose.compose(Pose(face_rotation(face), Vec3::Zero()));
    const RenderOutput r = rasterize(splats, cam, background);
    Raster& c = color.face(face);
    Raster& d = depth.face(face);
    for (int y = 0; y < n; ++y) {
      const double b = (y + 0.5) / (0.5 * n) - 1.0;
      for (int x = 0; x < n; ++x) {
        const double a = (x + 0.5) / (0.5 * n) - 1.0;
        const std::size_t i = static_cast<std::size_t>(y + pad) * padded + (x + pad);
        for (int k = 0; k < 3; ++k) c.at(x, y, k) = r.color[i * 3 + k];
        d.at(x, y, 0) = static_cast<float>(r.depth[i] * std::sqrt(1.0 + a * a + b * b));
      }
    }
  }
  return {cubemap_to_erp(color, grid), DepthMap::from_image(cubemap_to_erp(depth, grid))};
}

RenderOutput render_pinhole(const SplatSet& splats, const Pose& pose, int width, double fov_deg,
                            const Vec3& background) {
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) throw std::invalid_argument("render_pinhole: fov must be in (0, 180)");
  PinholeCamera cam;
  cam.width = cam.height = width;
  cam.fx = cam.fy = 0.5 * width / std::tan(0.5 * fov_deg * kPi / 180.0);
  cam.cx = cam.cy = 0.5 * width;
  cam.pose = pose.compose(Pose(face_rotation(CubeFace::kFront), Vec3::Zero()));
  return rasterize(splats, cam, background);
}

}  // namespace panosplat
