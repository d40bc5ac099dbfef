#include "panosplat/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace panosplat {
namespace {

void require_same_shape(const ErpImage& a, const ErpImage& b) {
  if (a.grid() != b.grid() || a.channels() != b.channels()) {
    throw std::invalid_argument("image shapes differ");
  }
}

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;

std::array<double, kSsimWindow> gaussian_window() {
  std::array<double, kSsimWindow> w{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    w[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

// Separable valid-mode filter of one channel; output is (w - 10) x (h - 10).
std::vector<double> filter_valid(const std::vector<double>& img, int w, int h) {
  static const auto kernel = gaussian_window();
  const int ow = w - kSsimWindow + 1;
  const int oh = h - kSsimWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += kernel[k] * img[static_cast<std::size_t>(y) * w + x + k];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += kernel[k] * tmp[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const ErpImage& a, const ErpImage& b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = static_cast<double>(a.data()[i]) - b.data()[i];
    sum += d * d;
  }
  const double mse = sum / static_cast<double>(a.data().size());
  if (mse < 1e-10) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

double ssim(const ErpImage& a, const ErpImage& b) {
  require_same_shape(a, b);
  const int w = a.width();
  const int h = a.height();
  if (w < kSsimWindow || h < kSsimWindow) {
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  }
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  const std::size_t n = a.grid().pixel_count();
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = a.data()[i * a.channels() + c];
      y[i] = b.data()[i * a.channels() + c];
      xx[i] = x[i] * x[i];
      yy[i] = y[i] * y[i];
      xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h);
    const auto my = filter_valid(y, w, h);
    const auto sxx = filter_valid(xx, w, h);
    const auto syy = filter_valid(yy, w, h);
    const auto sxy = filter_valid(xy, w, h);
    double acc = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
      const double mu_xy = mx[i] * my[i];
      const double mu_sq = mx[i] * mx[i] + my[i] * my[i];
      const double var_sum = (sxx[i] + syy[i]) - mu_sq;
      const double cov = sxy[i] - mu_xy;
      acc += ((2.0 * mu_xy + c1) * (2.0 * cov + c2)) / ((mu_sq + c1) * (var_sum + c2));
    }
    total += acc / static_cast<double>(mx.size());
  }
  return total / a.channels();
}

DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt) {
  return depth_metrics(pred, gt, std::vector<unsigned char>(gt.data.size(), 1));
}

DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt,
                           const std::vector<unsigned char>& mask) {
  if (pred.grid != gt.grid) throw std::invalid_argument("depth_metrics: grids differ");
  if (mask.size() != gt.data.size()) throw std::invalid_argument("depth_metrics: mask size mismatch");
  DepthMetrics m;
  double abs_sum = 0.0, rel_sum = 0.0, sq_sum = 0.0;
  std::size_t inliers = 0;
  for (std::size_t i = 0; i < gt.data.size(); ++i) {
    const float p = pred.data[i];
    const float g = gt.data[i];
    if (!mask[i] || !DepthMap::valid(p) || !DepthMap::valid(g)) continue;
    const double err = static_cast<double>(p) - g;
    abs_sum += std::abs(err);
    rel_sum += std::abs(err) / g;
    sq_sum += err * err;
    if (std::max(static_cast<double>(p) / g, static_cast<double>(g) / p) < 1.25) ++inliers;
    ++m.count;
  }
  if (m.count == 0) throw std::invalid_argument("depth_metrics: no pixel valid in both maps");
  const double n = static_cast<double>(m.count);
  m.abs_diff = abs_sum / n;
  m.abs_rel = rel_sum / n;
  m.rmse = std::sqrt(sq_sum / n);
  m.delta_1_25 = 100.0 * static_cast<double>(inliers) / n;
  return m;
}

}  // namespace panosplat
