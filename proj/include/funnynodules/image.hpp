#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace funnynodules {

// Grayscale raster with values in [0, 1], row-major.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<float> pixels;

  Image() = default;
  Image(int w, int h, float fill = 0.0f)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h),
               fill) {}

  float& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  float at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  bool operator==(const Image&) const = default;
};

// Binary raster, one byte per pixel holding 0 or 1.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int w, int h)
      : width(w), height(h),
        bits(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

  std::uint8_t& at(int x, int y) {
    return bits[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int x, int y) const {
    return bits[static_cast<std::size_t>(y) * width + x];
  }

  std::size_t count() const;

  bool operator==(const Mask&) const = default;
};

// round(v * 255), clamped to [0, 255].
std::vector<std::uint8_t> quantize8(const Image& img);

// Separable Gaussian blur, kernel truncated at 3*sigma, borders clamped.
// Accumulation runs in a fixed order so results are reproducible.
Image gaussian_blur(const Image& src, double sigma);

// Minimal PNG support: non-interlaced grayscale of any bit depth for reading;
// 8-bit gray, 1-bit gray and 8-bit RGB for writing. Covers everything this
// tool produces plus externally supplied attention maps.
void write_png_gray8(const std::filesystem::path& path, const Image& img);
void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     const std::uint8_t* data);
void write_png_rgb8_replicated(const std::filesystem::path& path,
                               const Image& img);
void write_png_mask1(const std::filesystem::path& path, const Mask& mask);
Image read_png_gray(const std::filesystem::path& path);
Mask read_png_mask(const std::filesystem::path& path);

// Raw PGM (P5), 8-bit.
void write_pgm(const std::filesystem::path& path, const Image& img);
Image read_pgm(const std::filesystem::path& path);

// Dispatch by extension (.png / .pgm); used for attention maps.
Image read_gray_image(const std::filesystem::path& path);

}  // namespace funnynodules
