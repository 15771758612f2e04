#include "funnynodules/image.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>

#include "funnynodules/errors.hpp"

namespace funnynodules {

std::size_t Mask::count() const {
  return static_cast<std::size_t>(
      std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::vector<std::uint8_t> quantize8(const Image& img) {
  std::vector<std::uint8_t> out(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const float v = std::clamp(img.pixels[i], 0.0f, 1.0f);
    out[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
  }
  return out;
}

Image gaussian_blur(const Image& src, double sigma) {
  if (sigma <= 0.0) return src;
  const int radius = std::max(1, static_cast<int>(std::floor(3.0 * sigma)));
  std::vector<double> kernel(radius + 1);
  double norm = 0.0;
  for (int d = 0; d <= radius; ++d) {
    kernel[d] = std::exp(-0.5 * (d * d) / (sigma * sigma));
    norm += (d == 0) ? kernel[d] : 2.0 * kernel[d];
  }
  for (auto& k : kernel) k /= norm;

  const int w = src.width;
  const int h = src.height;
  Image tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = kernel[0] * src.at(x, y);
      for (int d = 1; d <= radius; ++d) {
        const int xl = std::max(0, x - d);
        const int xr = std::min(w - 1, x + d);
        acc += kernel[d] * (src.at(xl, y) + src.at(xr, y));
      }
      tmp.at(x, y) = static_cast<float>(acc);
    }
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = kernel[0] * tmp.at(x, y);
      for (int d = 1; d <= radius; ++d) {
        const int yt = std::max(0, y - d);
        const int yb = std::min(h - 1, y + d);
        acc += kernel[d] * (tmp.at(x, yt) + tmp.at(x, yb));
      }
      out.at(x, y) = static_cast<float>(acc);
    }
  }
  return out;
}

namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t read_u32_be(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& data) {
  put_u32_be(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc =
      crc32(0, out.data() + crc_start, static_cast<uInt>(4 + data.size()));
  put_u32_be(out, static_cast<std::uint32_t>(crc));
}

std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& raw) {
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> out(bound);
  if (compress2(out.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                6) != Z_OK) {
    throw IoError("zlib compression failed");
  }
  out.resize(bound);
  return out;
}

constexpr std::array<std::uint8_t, 8> kPngSignature = {137, 80, 78, 71,
                                                       13,  10, 26, 10};

void write_png_file(const std::filesystem::path& path, int width, int height,
                    int bit_depth, int color_type,
                    const std::vector<std::uint8_t>& raw_scanlines) {
  std::vector<std::uint8_t> file;
  file.insert(file.end(), kPngSignature.begin(), kPngSignature.end());

  std::vector<std::uint8_t> ihdr;
  put_u32_be(ihdr, static_cast<std::uint32_t>(width));
  put_u32_be(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(static_cast<std::uint8_t>(bit_depth));
  ihdr.push_back(static_cast<std::uint8_t>(color_type));
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter
  ihdr.push_back(0);  // interlace
  append_chunk(file, "IHDR", ihdr);
  append_chunk(file, "IDAT", zlib_deflate(raw_scanlines));
  append_chunk(file, "IEND", {});

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f.write(reinterpret_cast<const char*>(file.data()),
          static_cast<std::streamsize>(file.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

struct PngImage {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  std::vector<std::uint16_t> samples;  // one per pixel, grayscale
};

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a);
  const int pb = std::abs(p - b);
  const int pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

PngImage read_png_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path.string());
  std::vector<std::uint8_t> file((std::istreambuf_iterator<char>(f)),
                                 std::istreambuf_iterator<char>());
  if (file.size() < 8 ||
      !std::equal(kPngSignature.begin(), kPngSignature.end(), file.begin())) {
    throw IoError("not a PNG file: " + path.string());
  }

  PngImage img;
  int color_type = -1;
  std::vector<std::uint8_t> idat;
  std::size_t pos = 8;
  while (pos + 8 <= file.size()) {
    const std::uint32_t len = read_u32_be(&file[pos]);
    if (pos + 12 + len > file.size()) {
      throw IoError("truncated PNG: " + path.string());
    }
    const std::string type(reinterpret_cast<const char*>(&file[pos + 4]), 4);
    const std::uint8_t* data = &file[pos + 8];
    if (type == "IHDR") {
      if (len != 13) throw IoError("bad IHDR: " + path.string());
      img.width = static_cast<int>(read_u32_be(data));
      img.height = static_cast<int>(read_u32_be(data + 4));
      img.bit_depth = data[8];
      color_type = data[9];
      if (data[12] != 0) {
        throw IoError("interlaced PNG not supported: " + path.string());
      }
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (img.width <= 0 || img.height <= 0) {
    throw IoError("missing IHDR: " + path.string());
  }
  if (color_type != 0) {
    throw IoError("only grayscale PNG supported: " + path.string());
  }

  const int depth = img.bit_depth;
  const std::size_t row_bytes =
      (static_cast<std::size_t>(img.width) * depth + 7) / 8;
  const std::size_t expected =
      static_cast<std::size_t>(img.height) * (row_bytes + 1);
  std::vector<std::uint8_t> raw(expected);
  uLongf dest_len = static_cast<uLongf>(expected);
  if (uncompress(raw.data(), &dest_len, idat.data(),
                 static_cast<uLong>(idat.size())) != Z_OK ||
      dest_len != expected) {
    throw IoError("corrupt PNG data: " + path.string());
  }

  // Undo scanline filters in place.
  const std::size_t bpp = std::max<std::size_t>(1, (depth + 7) / 8);
  std::vector<std::uint8_t> prev(row_bytes, 0);
  std::vector<std::uint8_t> cur(row_bytes);
  std::vector<std::uint8_t> unfiltered;
  unfiltered.reserve(static_cast<std::size_t>(img.height) * row_bytes);
  for (int y = 0; y < img.height; ++y) {
    const std::uint8_t* row = &raw[static_cast<std::size_t>(y) * (row_bytes + 1)];
    const int filter = row[0];
    std::memcpy(cur.data(), row + 1, row_bytes);
    for (std::size_t i = 0; i < row_bytes; ++i) {
      const int a = i >= bpp ? cur[i - bpp] : 0;
      const int b = prev[i];
      const int c = i >= bpp ? prev[i - bpp] : 0;
      switch (filter) {
        case 0: break;
        case 1: cur[i] = static_cast<std::uint8_t>(cur[i] + a); break;
        case 2: cur[i] = static_cast<std::uint8_t>(cur[i] + b); break;
        case 3: cur[i] = static_cast<std::uint8_t>(cur[i] + (a + b) / 2); break;
        case 4: cur[i] = static_cast<std::uint8_t>(cur[i] + paeth(a, b, c)); break;
        default: throw IoError("bad PNG filter: " + path.string());
      }
    }
    unfiltered.insert(unfiltered.end(), cur.begin(), cur.end());
    std::swap(prev, cur);
  }

  // Unpack samples.
  img.samples.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int y = 0; y < img.height; ++y) {
    const std::uint8_t* row = &unfiltered[static_cast<std::size_t>(y) * row_bytes];
    for (int x = 0; x < img.width; ++x) {
      std::uint16_t s = 0;
      if (depth == 16) {
        s = static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
      } else if (depth == 8) {
        s = row[x];
      } else {  // 1, 2, 4
        const int per_byte = 8 / depth;
        const std::uint8_t byte = row[x / per_byte];
        const int shift = 8 - depth * (x % per_byte + 1);
        s = static_cast<std::uint16_t>((byte >> shift) & ((1 << depth) - 1));
      }
      img.samples[static_cast<std::size_t>(y) * img.width + x] = s;
    }
  }
  return img;
}

}  // namespace

void write_png_gray8(const std::filesystem::path& path, int width, int height,
                     const std::uint8_t* data) {
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(height) * (width + 1));
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);  // filter: none
    raw.insert(raw.end(), data + static_cast<std::size_t>(y) * width,
               data + static_cast<std::size_t>(y + 1) * width);
  }
  write_png_file(path, width, height, 8, 0, raw);
}

void write_png_gray8(const std::filesystem::path& path, const Image& img) {
  const auto q = quantize8(img);
  write_png_gray8(path, img.width, img.height, q.data());
}

void write_png_rgb8_replicated(const std::filesystem::path& path,
                               const Image& img) {
  const auto q = quantize8(img);
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(img.height) * (3 * img.width + 1));
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t v = q[static_cast<std::size_t>(y) * img.width + x];
      raw.push_back(v);
      raw.push_back(v);
      raw.push_back(v);
    }
  }
  write_png_file(path, img.width, img.height, 8, 2, raw);
}

void write_png_mask1(const std::filesystem::path& path, const Mask& mask) {
  const std::size_t row_bytes = (static_cast<std::size_t>(mask.width) + 7) / 8;
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(mask.height) * (row_bytes + 1));
  for (int y = 0; y < mask.height; ++y) {
    raw.push_back(0);
    std::uint8_t byte = 0;
    for (int x = 0; x < mask.width; ++x) {
      byte = static_cast<std::uint8_t>((byte << 1) | (mask.at(x, y) ? 1 : 0));
      if (x % 8 == 7) {
        raw.push_back(byte);
        byte = 0;
      }
    }
    if (mask.width % 8 != 0) {
      byte = static_cast<std::uint8_t>(byte << (8 - mask.width % 8));
      raw.push_back(byte);
    }
  }
  write_png_file(path, mask.width, mask.height, 1, 0, raw);
}

Image read_png_gray(const std::filesystem::path& path) {
  const PngImage png = read_png_file(path);
  Image img(png.width, png.height);
  const float maxval = static_cast<float>((1u << png.bit_depth) - 1);
  for (std::size_t i = 0; i < png.samples.size(); ++i) {
    img.pixels[i] = static_cast<float>(png.samples[i]) / maxval;
  }
  return img;
}

Mask read_png_mask(const std::filesystem::path& path) {
  const PngImage png = read_png_file(path);
  Mask mask(png.width, png.height);
  const std::uint16_t half =
      static_cast<std::uint16_t>(((1u << png.bit_depth) - 1) / 2);
  for (std::size_t i = 0; i < png.samples.size(); ++i) {
    mask.bits[i] = png.samples[i] > half ? 1 : 0;
  }
  return mask;
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << "P5\n" << img.width << " " << img.height << "\n255\n";
  const auto q = quantize8(img);
  f.write(reinterpret_cast<const char*>(q.data()),
          static_cast<std::streamsize>(q.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path.string());
  std::string magic;
  f >> magic;
  if (magic != "P5") throw IoError("not a P5 PGM: " + path.string());
  int w = 0, h = 0, maxval = 0;
  f >> w >> h >> maxval;
  f.get();  // single whitespace after header
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw IoError("bad PGM header: " + path.string());
  }
  const int bytes = maxval > 255 ? 2 : 1;
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * bytes);
  f.read(reinterpret_cast<char*>(data.data()),
         static_cast<std::streamsize>(data.size()));
  if (!f) throw IoError("truncated PGM: " + path.string());
  Image img(w, h);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const int v = bytes == 2 ? (data[2 * i] << 8) | data[2 * i + 1] : data[i];
    img.pixels[i] = static_cast<float>(v) / static_cast<float>(maxval);
  }
  return img;
}

Image read_gray_image(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".pgm") return read_pgm(path);
  return read_png_gray(path);
}

}  // namespace funnynodules
