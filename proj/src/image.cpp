/*
Copyright 2026 The texbake Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "texbake/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace texbake {

std::uint8_t to_byte(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

RgbF to_float(const Rgb8& image) {
  RgbF out(image.width(), image.height());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / 255.0f;
  return out;
}

Rgb8 to_bytes(const RgbF& image) {
  Rgb8 out(image.width(), image.height());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = to_byte(src[i]);
  return out;
}

Rgb8 gray_to_rgb(const Gray8& image) {
  Rgb8 out(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const std::uint8_t g = image(x, y);
      std::uint8_t* p = out.at(x, y);
      p[0] = p[1] = p[2] = g;
    }
  }
  return out;
}

namespace {

int wrap_index(int i, int n) {
  const int m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace

Eigen::Vector3f sample_bilinear_wrap(const RgbF& texture, double u, double v) {
  const int w = texture.width();
  const int h = texture.height();
  if (w == 0 || h == 0) return Eigen::Vector3f::Zero();
  const double fx = u * w - 0.5;
  const double fy = (1.0 - v) * h - 0.5;
  const double x0f = std::floor(fx);
  const double y0f = std::floor(fy);
  const float tx = static_cast<float>(fx - x0f);
  const float ty = static_cast<float>(fy - y0f);
  const int x0 = wrap_index(static_cast<int>(x0f), w);
  const int y0 = wrap_index(static_cast<int>(y0f), h);
  const int x1 = wrap_index(static_cast<int>(x0f) + 1, w);
  const int y1 = wrap_index(static_cast<int>(y0f) + 1, h);
  const Eigen::Map<const Eigen::Vector3f> c00(texture.at(x0, y0));
  const Eigen::Map<const Eigen::Vector3f> c10(texture.at(x1, y0));
  const Eigen::Map<const Eigen::Vector3f> c01(texture.at(x0, y1));
  const Eigen::Map<const Eigen::Vector3f> c11(texture.at(x1, y1));
  return (1 - ty) * ((1 - tx) * c00 + tx * c10) + ty * ((1 - tx) * c01 + tx * c11);
}

namespace {

struct WriteState {
  std::vector<std::uint8_t>* out;
};

void write_to_vector(png_structp png, png_bytep data, png_size_t length) {
  auto* state = static_cast<WriteState*>(png_get_io_ptr(png));
  state->out->insert(state->out->end(), data, data + length);
}

void flush_noop(png_structp) {}

[[noreturn]] void png_error_throw(png_structp, png_const_charp message) {
  throw std::runtime_error(std::string("png: ") + message);
}

void png_warning_ignore(png_structp, png_const_charp) {}

// Writes rows of already-packed bytes. row_bytes is the packed size per row.
std::vector<std::uint8_t> encode_rows(
    int width, int height, int bit_depth, int color_type,
    const std::vector<const std::uint8_t*>& rows,
    std::span<const std::array<std::uint8_t, 3>> palette = {}) {
  std::vector<std::uint8_t> out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                            png_error_throw, png_warning_ignore);
  if (png == nullptr) throw std::runtime_error("png: cannot create writer");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png: cannot create info");
  }
  WriteState state{&out};
  try {
    png_set_write_fn(png, &state, write_to_vector, flush_noop);
    png_set_IHDR(png, info, width, height, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_color> plte;
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
      for (const auto& c : palette) plte.push_back({c[0], c[1], c[2]});
      png_set_PLTE(png, info, plte.data(), static_cast<int>(plte.size()));
    }
    png_write_info(png, info);
    for (const std::uint8_t* row : rows) {
      png_write_row(png, const_cast<png_bytep>(row));
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

template <typename Img>
std::vector<const std::uint8_t*> row_pointers(const Img& image) {
  std::vector<const std::uint8_t*> rows(image.height());
  for (int y = 0; y < image.height(); ++y) rows[y] = image.at(0, y);
  return rows;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Rgb8& image) {
  return encode_rows(image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
                     row_pointers(image));
}

std::vector<std::uint8_t> encode_png(const Gray8& image) {
  return encode_rows(image.width(), image.height(), 8, PNG_COLOR_TYPE_GRAY,
                     row_pointers(image));
}

std::vector<std::uint8_t> encode_png_1bit(const Gray8& mask) {
  const int w = mask.width();
  const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
  std::vector<std::uint8_t> packed(row_bytes * mask.height(), 0);
  std::vector<const std::uint8_t*> rows(mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    std::uint8_t* row = packed.data() + row_bytes * y;
    for (int x = 0; x < w; ++x) {
      if (mask(x, y) != 0) row[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
    }
    rows[y] = row;
  }
  return encode_rows(w, mask.height(), 1, PNG_COLOR_TYPE_GRAY, rows);
}

std::vector<std::uint8_t> encode_png_indexed(
    const Gray8& indices, std::span<const std::array<std::uint8_t, 3>> palette) {
  if (palette.empty() || palette.size() > 256) {
    throw std::invalid_argument("palette must hold 1..256 entries");
  }
  for (std::uint8_t i : indices.data()) {
    if (i >= palette.size()) throw std::invalid_argument("palette index out of range");
  }
  return encode_rows(indices.width(), indices.height(), 8, PNG_COLOR_TYPE_PALETTE,
                     row_pointers(indices), palette);
}

namespace {

struct ReadState {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_from_span(png_structp png, png_bytep data, png_size_t length) {
  auto* state = static_cast<ReadState*>(png_get_io_ptr(png));
  if (state->offset + length > state->bytes.size()) {
    png_error(png, "truncated stream");
  }
  std::memcpy(data, state->bytes.data() + state->offset, length);
  state->offset += length;
}

// Decodes into 8-bit samples with the requested channel count (1 or 3).
std::vector<std::uint8_t> decode(std::span<const std::uint8_t> bytes, int channels,
                                 int* width, int* height, PngInfo* info_out) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw std::runtime_error("png: not a PNG stream");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                           png_error_throw, png_warning_ignore);
  if (png == nullptr) throw std::runtime_error("png: cannot create reader");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png: cannot create info");
  }
  ReadState state{bytes, 0};
  std::vector<std::uint8_t> out;
  try {
    png_set_read_fn(png, &state, read_from_span);
    png_read_info(png, info);
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (info_out != nullptr) *info_out = {w, h, bit_depth, color_type};
    if (channels == 0) {
      png_destroy_read_struct(&png, &info, nullptr);
      return {};
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
    if (bit_depth == 16) png_set_strip_16(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    const bool is_gray = (color_type & PNG_COLOR_MASK_COLOR) == 0;
    if (channels == 3 && is_gray) png_set_gray_to_rgb(png);
    if (channels == 1 && !is_gray) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);
    const std::size_t row_bytes = png_get_rowbytes(png, info);
    if (row_bytes != static_cast<std::size_t>(w) * channels) {
      png_error(png, "unexpected row layout");
    }
    out.resize(row_bytes * h);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = out.data() + row_bytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    *width = w;
    *height = h;
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace

PngInfo inspect_png(std::span<const std::uint8_t> bytes) {
  PngInfo info;
  int w = 0, h = 0;
  decode(bytes, 0, &w, &h, &info);
  return info;
}

Rgb8 decode_png_rgb(std::span<const std::uint8_t> bytes) {
  int w = 0, h = 0;
  PngInfo info;
  std::vector<std::uint8_t> pixels = decode(bytes, 3, &w, &h, &info);
  Rgb8 image(w, h);
  std::copy(pixels.begin(), pixels.end(), image.data().begin());
  return image;
}

Gray8 decode_png_gray(std::span<const std::uint8_t> bytes) {
  int w = 0, h = 0;
  PngInfo info;
  std::vector<std::uint8_t> pixels = decode(bytes, 1, &w, &h, &info);
  Gray8 image(w, h);
  std::copy(pixels.begin(), pixels.end(), image.data().begin());
  return image;
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_png(const std::filesystem::path& path, const Rgb8& image) {
  write_file(path, encode_png(image));
}

void write_png(const std::filesystem::path& path, const Gray8& image) {
  write_file(path, encode_png(image));
}

Rgb8 read_png_rgb(const std::filesystem::path& path) {
  return decode_png_rgb(read_file(path));
}

}  // namespace texbake
