#include "panosplat/image_io.h"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace panosplat {
namespace {

unsigned char quantize(float v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

std::vector<unsigned char> to_bytes(const Raster& img, png_uint_32& format) {
  if (img.channels != 1 && img.channels != 3) {
    throw IoError("PNG output supports 1 or 3 channels, got " + std::to_string(img.channels));
  }
  format = img.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  std::vector<unsigned char> bytes(img.data.size());
  std::transform(img.data.begin(), img.data.end(), bytes.begin(), quantize);
  return bytes;
}

png_image make_image(const Raster& img, png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = format;
  return image;
}

void put_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

Raster read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> bytes(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, bytes.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path.string() + ": " + image.message);
  }
  Raster out(static_cast<int>(image.width), static_cast<int>(image.height), 3);
  for (std::size_t i = 0; i < bytes.size(); ++i) out.data[i] = bytes[i] / 255.0f;
  return out;
}

void write_png(const std::filesystem::path& path, const Raster& img) {
  png_uint_32 format = 0;
  const auto bytes = to_bytes(img, format);
  png_image image = make_image(img, format);
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + image.message);
  }
}

std::vector<unsigned char> encode_png(const Raster& img) {
  png_uint_32 format = 0;
  const auto bytes = to_bytes(img, format);
  png_image image = make_image(img, format);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, bytes.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<unsigned char> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, bytes.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

Raster to_raster(const ErpImage& img) {
  Raster r(img.width(), img.height(), img.channels());
  r.data = img.data();
  return r;
}

ErpImage to_erp(const Raster& r) { return ErpImage(ErpGrid(r.width, r.height), r.channels, r.data); }

ErpImage read_png_erp(const std::filesystem::path& path) {
  const Raster r = read_png(path);
  try {
    return to_erp(r);
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + " is not an equirectangular image: " + e.what());
  }
}

void write_png(const std::filesystem::path& path, const ErpImage& img) { write_png(path, to_raster(img)); }

std::vector<unsigned char> encode_png(const ErpImage& img) { return encode_png(to_raster(img)); }

SdptRaster read_sdpt(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  unsigned char header[12];
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header)) ||
      std::memcmp(header, "SDPT", 4) != 0) {
    throw IoError(path.string() + ": missing SDPT header");
  }
  SdptRaster r;
  r.width = get_u32(header + 4);
  r.height = get_u32(header + 8);
  const std::size_t n = static_cast<std::size_t>(r.width) * r.height;
  std::vector<unsigned char> payload(n * 4);
  if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()))) {
    throw IoError(path.string() + ": truncated SDPT payload");
  }
  r.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.values[i] = std::bit_cast<float>(get_u32(&payload[i * 4]));
  return r;
}

void write_sdpt(const std::filesystem::path& path, const SdptRaster& r) {
  if (r.values.size() != static_cast<std::size_t>(r.width) * r.height) {
    throw IoError("write_sdpt: value count does not match dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write("SDPT", 4);
  put_u32(out, r.width);
  put_u32(out, r.height);
  for (float v : r.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  if (!out) throw IoError("write failed: " + path.string());
}

DepthMap read_depth(const std::filesystem::path& path) {
  SdptRaster r = read_sdpt(path);
  try {
    return DepthMap(ErpGrid(static_cast<int>(r.width), static_cast<int>(r.height)), std::move(r.values));
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_depth(const std::filesystem::path& path, const DepthMap& d) {
  write_sdpt(path, SdptRaster{static_cast<std::uint32_t>(d.grid.width()),
                              static_cast<std::uint32_t>(d.grid.height()), d.data});
}

}  // namespace panosplat
