#include "panosplat/sweep.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "panosplat/parallel.h"

namespace panosplat {

DepthCandidates make_candidates(double near, double far, int count) {
  if (!(near > 0.0) || !(far > near) || !std::isfinite(far)) {
    throw std::invalid_argument("make_candidates: need 0 < near < far, got near=" +
                                std::to_string(near) + " far=" + std::to_string(far));
  }
  if (count < 2) throw std::invalid_argument("make_candidates: need at least 2 candidates");
  DepthCandidates c;
  c.near = near;
  c.far = far;
  c.values.resize(count);
  const double log_ratio = std::log(far / near);
  for (int k = 0; k < count; ++k) {
    c.values[k] = near * std::exp(log_ratio * k / (count - 1));
  }
  c.values.front() = near;
  c.values.back() = far;
  return c;
}

CostVolume::CostVolume(const ErpGrid& g, DepthCandidates cands, float fill)
    : grid(g), candidates(std::move(cands)), data(g.pixel_count() * candidates.count(), fill) {}

CostVolume build_cost_volume(const FeatureMap& f_ref, std::span<const FeatureMap> f_src,
                             const Pose& pose_ref, std::span<const Pose> pose_src,
                             const DepthCandidates& cands) {
  if (f_src.empty()) throw std::invalid_argument("build_cost_volume: need at least one source view");
  if (f_src.size() != pose_src.size()) {
    throw std::invalid_argument("build_cost_volume: source feature / pose count mismatch");
  }
  for (const FeatureMap& f : f_src) {
    if (f.grid() != f_ref.grid() || f.channels() != f_ref.channels()) {
      throw std::invalid_argument("build_cost_volume: source features differ in grid or channels");
    }
  }
  const ErpGrid grid = f_ref.grid();
  const int c = f_ref.channels();
  const int d = cands.count();
  const double inv_sqrt_c = 1.0 / std::sqrt(static_cast<double>(c));
  const double inv_sources = 1.0 / static_cast<double>(f_src.size());

  std::vector<Pose> to_src;
  to_src.reserve(pose_src.size());
  for (const Pose& p : pose_src) to_src.push_back(relative(pose_ref, p));

  CostVolume cv(grid, cands);
  parallel_for(0, grid.height(), [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    std::vector<double> sample(c);
    std::vector<double> acc(d);
    for (int x = 0; x < grid.width(); ++x) {
      const Vec3 dir = pixel_direction(x, y, grid);
      const std::span<const float> ref = f_ref.raster.pixel(x, y);
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t j = 0; j < f_src.size(); ++j) {
        for (int m = 0; m < d; ++m) {
          const Vec3 q = to_src[j].transform_point(cands.values[m] * dir);
          if (q.squaredNorm() == 0.0) continue;  // point at the source center: no bearing
          const auto [u, v] = spherical_to_pixel(cartesian_to_spherical(q), grid);
          sample_bilinear(f_src[j].raster, u, v, sample);
          double dot = 0.0;
          for (int k = 0; k < c; ++k) dot += ref[k] * sample[k];
          acc[m] += dot * inv_sqrt_c;
        }
      }
      for (int m = 0; m < d; ++m) cv.at(x, y, m) = static_cast<float>(acc[m] * inv_sources);
    }
  });
  return cv;
}

CostVolume refine_cost_volume(const CostVolume& cv, int radius) {
  if (radius < 0) throw std::invalid_argument("refine_cost_volume: negative radius");
  if (radius == 0) return cv;
  const int w = cv.grid.width();
  const int h = cv.grid.height();
  const int d = cv.depth_count();
  const double norm = 1.0 / ((2 * radius + 1) * (2 * radius + 1));

  // Horizontal pass (wrapped), then vertical pass (replicated rows).
  std::vector<double> horiz(cv.data.size());
  parallel_for(0, h, [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    for (int x = 0; x < w; ++x) {
      for (int m = 0; m < d; ++m) {
        double s = 0.0;
        for (int dx = -radius; dx <= radius; ++dx) {
          const int col = ((x + dx) % w + w) % w;
          s += cv.at(col, y, m);
        }
        horiz[cv.index(x, y, m)] = s;
      }
    }
  });
  CostVolume out(cv.grid, cv.candidates);
  parallel_for(0, h, [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    for (int x = 0; x < w; ++x) {
      for (int m = 0; m < d; ++m) {
        double s = 0.0;
        for (int dy = -radius; dy <= radius; ++dy) {
          s += horiz[cv.index(x, std::clamp(y + dy, 0, h - 1), m)];
        }
        const double base = cv.at(x, y, m);
        const double residual = s * norm - base;
        out.at(x, y, m) = static_cast<float>(base + residual);
      }
    }
  });
  return out;
}

PixelDepth softmax_pixel(std::span<const float> scores, const DepthCandidates& cands,
                         double temperature) {
  double best = -std::numeric_limits<double>::infinity();
  for (float s : scores) best = std::max(best, static_cast<double>(s));
  double sum = 0.0;
  double weighted = 0.0;
  double peak = 0.0;
  for (std::size_t m = 0; m < scores.size(); ++m) {
    const double p = std::exp((scores[m] - best) / temperature);
    sum += p;
    weighted += p * cands.values[m];
    peak = std::max(peak, p);
  }
  return {std::clamp(weighted / sum, cands.near, cands.far), peak / sum};
}

DepthResult softmax_depth(const CostVolume& cv, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("softmax_depth: temperature must be > 0");
  DepthResult out{DepthMap(cv.grid), ErpImage(cv.grid, 1)};
  parallel_for(0, cv.grid.height(), [&](std::int64_t yy) {
    const int y = static_cast<int>(yy);
    for (int x = 0; x < cv.grid.width(); ++x) {
      const PixelDepth pd = softmax_pixel(cv.scores(x, y), cv.candidates, temperature);
      out.depth.at(x, y) = static_cast<float>(pd.depth);
      out.confidence.at(x, y, 0) = static_cast<float>(pd.confidence);
    }
  });
  return out;
}

std::vector<DepthResult> estimate_depth(std::span<const ErpImage> images, std::span<const Pose> poses,
                                        const DepthConfig& config) {
  if (images.size() < 2) throw std::invalid_argument("estimate_depth: need at least two views");
  if (images.size() != poses.size()) throw std::invalid_argument("estimate_depth: image / pose count mismatch");
  for (const ErpImage& img : images) {
    if (img.grid() != images.front().grid()) {
      throw std::invalid_argument("estimate_depth: all views must share one grid");
    }
  }
  const DepthCandidates cands = make_candidates(config.near, config.far, config.num_candidates);
  std::vector<FeatureMap> features;
  features.reserve(images.size());
  for (const ErpImage& img : images) features.push_back(extract_features(img, config.features));

  const ErpGrid full = images.front().grid();
  std::vector<DepthResult> results;
  results.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::vector<FeatureMap> src;
    std::vector<Pose> src_poses;
    for (std::size_t j = 0; j < images.size(); ++j) {
      if (j == i) continue;
      src.push_back(features[j]);
      src_poses.push_back(poses[j]);
    }
    CostVolume cv = build_cost_volume(features[i], src, poses[i], src_poses, cands);
    cv = refine_cost_volume(cv, config.refine_radius);
    DepthResult coarse = softmax_depth(cv, config.temperature);
    DepthMap depth = DepthMap::from_image(resample(coarse.depth.as_image(), full));
    for (float& v : depth.data) v = std::clamp(v, static_cast<float>(cands.near), static_cast<float>(cands.far));
    results.push_back({std::move(depth), resample(coarse.confidence, full)});
  }
  return results;
}

}  // namespace panosplat
