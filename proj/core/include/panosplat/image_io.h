#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "panosplat/pano_image.h"

namespace panosplat {

/// Raised for unreadable, unwritable or malformed files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 8-bit PNG. Grayscale and alpha inputs are expanded / dropped to RGB.
Raster read_png(const std::filesystem::path& path);
/// Writes 1 or 3 channel rasters as 8-bit gray / RGB; values clamp to [0, 1].
void write_png(const std::filesystem::path& path, const Raster& img);
std::vector<unsigned char> encode_png(const Raster& img);

ErpImage read_png_erp(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ErpImage& img);
std::vector<unsigned char> encode_png(const ErpImage& img);

Raster to_raster(const ErpImage& img);
ErpImage to_erp(const Raster& r);

/// "SDPT" raster: magic, u32 width, u32 height, width*height f32, all little-endian.
struct SdptRaster {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<float> values;
};

SdptRaster read_sdpt(const std::filesystem::path& path);
void write_sdpt(const std::filesystem::path& path, const SdptRaster& r);

DepthMap read_depth(const std::filesystem::path& path);
void write_depth(const std::filesystem::path& path, const DepthMap& d);

}  // namespace panosplat
