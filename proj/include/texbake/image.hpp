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

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Geometry>

namespace texbake {

// Dense row-major image with interleaved channels. Row 0 is the top row.
template <typename T, int Channels>
class Image {
 public:
  static constexpr int kChannels = Channels;
  using value_type = T;

  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height * Channels, fill) {
    if (width < 0 || height < 0) {
      throw std::invalid_argument("image dimensions must be non-negative");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T* at(int x, int y) { return data_.data() + index(x, y); }
  const T* at(int x, int y) const { return data_.data() + index(x, y); }

  T& operator()(int x, int y, int c = 0) { return data_[index(x, y) + c]; }
  T operator()(int x, int y, int c = 0) const { return data_[index(x, y) + c]; }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * Channels;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using Rgb8 = Image<std::uint8_t, 3>;
using Gray8 = Image<std::uint8_t, 1>;
using RgbF = Image<float, 3>;
using GrayF = Image<float, 1>;

// Round-to-nearest quantization of a [0,1] value to 8 bits, clamped.
std::uint8_t to_byte(double v);

RgbF to_float(const Rgb8& image);
Rgb8 to_bytes(const RgbF& image);
Rgb8 gray_to_rgb(const Gray8& image);

// Bilinear lookup with wrap addressing. (u, v) follow the texture convention:
// u grows to the right, v grows upward, so v = 1 is the top image row.
Eigen::Vector3f sample_bilinear_wrap(const RgbF& texture, double u, double v);

// PNG codec (libpng). Encoding is deterministic for a given libpng/zlib.
std::vector<std::uint8_t> encode_png(const Rgb8& image);
std::vector<std::uint8_t> encode_png(const Gray8& image);
// 1-bit grayscale; any nonzero pixel is written as 1.
std::vector<std::uint8_t> encode_png_1bit(const Gray8& mask);
// Palette PNG: one index per pixel, palette entries as RGB triples.
std::vector<std::uint8_t> encode_png_indexed(
    const Gray8& indices, std::span<const std::array<std::uint8_t, 3>> palette);

struct PngInfo {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int color_type = 0;  // libpng PNG_COLOR_TYPE_* value
};
PngInfo inspect_png(std::span<const std::uint8_t> bytes);

// Decoders expand palette, low bit depth, and alpha so that any PNG can be
// read as 8-bit RGB or gray. 1-bit gray decodes to 0/255.
Rgb8 decode_png_rgb(std::span<const std::uint8_t> bytes);
Gray8 decode_png_gray(std::span<const std::uint8_t> bytes);

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Rgb8& image);
void write_png(const std::filesystem::path& path, const Gray8& image);
Rgb8 read_png_rgb(const std::filesystem::path& path);

}  // namespace texbake
