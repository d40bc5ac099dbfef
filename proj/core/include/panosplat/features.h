#pragma once

#include "panosplat/pano_image.h"

namespace panosplat {

/// Channels of the hand-crafted descriptor, in order.
enum FeatureChannel : int { kLuminance = 0, kGradX, kGradY, kDetail, kFeatureChannels };

/// Per-pixel descriptors on the matching grid.
struct FeatureMap {
  ErpImage raster;
  bool normalized = false;

  const ErpGrid& grid() const { return raster.grid(); }
  int channels() const { return raster.channels(); }
};

struct FeatureOptions {
  int downsample = 8;  // matching resolution is 1/downsample of the input
  int face_size = 0;   // cube face size for the CP branch; 0 picks width / 4
  bool normalize = true;
  bool use_cubemap = true;  // fuse the CP branch into the ERP branch
  bool center_luminance = true;  // luminance channel relative to the view's mean
};

/// Rec. 601 luma for rgb; plain mean for other channel counts.
double luminance(std::span<const float> px);
/// Mean luminance over all pixels of an ERP image.
double mean_luminance(const ErpImage& img);

/// ERP branch: box-downsampled luminance (minus the image mean when `center`),
/// central-difference gradients (seam wrapped horizontally, replicated at the pole
/// rows) and 3x3 mean-removed detail.
/// Throws std::invalid_argument unless downsample is 1, 2, 4 or 8 and divides the image.
FeatureMap extract_erp_features(const ErpImage& img, int downsample, bool normalize = true,
                                bool center = true);

/// CP branch: the same recipe per cube face (faces rendered with one matching
/// pixel of padding so gradients never clamp at face edges), stitched to the
/// matching grid. `center` subtracts the ERP image's mean luminance.
FeatureMap extract_cp_features(const ErpImage& img, int face_size, int downsample,
                               bool normalize = true, bool center = true);

/// Weight of the CP branch at latitude phi: 1 - cos(phi).
double fusion_weight(double phi);

/// w * cp + (1 - w) * erp per pixel, renormalized when both inputs are.
FeatureMap fuse_biprojection(const FeatureMap& f_erp, const FeatureMap& f_cp);

/// Full bi-projection descriptor as used for matching.
FeatureMap extract_features(const ErpImage& img, const FeatureOptions& opt);

/// Scales every pixel vector to unit L2 norm; all-zero vectors stay zero.
void normalize_features(FeatureMap& f);

}  // namespace panosplat
