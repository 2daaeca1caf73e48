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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "texbake/raster.hpp"

namespace texbake {

namespace {

constexpr double kSigma = 1.4;

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;
  return kernel;
}

// Separable blur with replicated borders.
std::vector<double> blur(const GrayF& image) {
  const int w = image.width();
  const int h = image.height();
  const std::vector<double> kernel = gaussian_kernel(kSigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> tmp(static_cast<std::size_t>(w) * h);
  std::vector<double> out(tmp.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) s += kernel[k + radius] * image(clamp_index(x + k, w), y);
      tmp[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        s += kernel[k + radius] * tmp[static_cast<std::size_t>(clamp_index(y + k, h)) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = s;
    }
  }
  return out;
}

}  // namespace

Gray8 canny(const GrayF& image, double low, double high) {
  if (!(low >= 0.0 && low <= high && high <= 1.0)) {
    throw std::invalid_argument("canny thresholds must satisfy 0 <= low <= high <= 1");
  }
  const int w = image.width();
  const int h = image.height();
  Gray8 edges(w, h, 0);
  if (w == 0 || h == 0) return edges;
  const std::vector<double> smooth = blur(image);
  auto at = [&](int x, int y) {
    return smooth[static_cast<std::size_t>(clamp_index(y, h)) * w + clamp_index(x, w)];
  };

  std::vector<double> magnitude(smooth.size());
  std::vector<std::uint8_t> sector(smooth.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = (at(x + 1, y - 1) + 2 * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2 * at(x - 1, y) + at(x - 1, y + 1));
      const double gy = (at(x - 1, y + 1) + 2 * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2 * at(x, y - 1) + at(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      magnitude[i] = std::hypot(gx, gy) / 4.0;
      // Quantize the gradient direction to 0, 45, 90, 135 degrees.
      double angle = std::atan2(gy, gx) * 180.0 / 3.14159265358979323846;
      if (angle < 0) angle += 180.0;
      if (angle < 22.5 || angle >= 157.5) {
        sector[i] = 0;
      } else if (angle < 67.5) {
        sector[i] = 1;
      } else if (angle < 112.5) {
        sector[i] = 2;
      } else {
        sector[i] = 3;
      }
    }
  }

  auto mag = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return magnitude[static_cast<std::size_t>(y) * w + x];
  };
  // 0: strong, 1: weak, 2: suppressed
  std::vector<std::uint8_t> state(smooth.size(), 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double m = magnitude[i];
      if (m < low || m <= 0.0) continue;
      double before = 0.0;
      double after = 0.0;
      switch (sector[i]) {
        case 0:
          before = mag(x - 1, y);
          after = mag(x + 1, y);
          break;
        case 1:  // gradient along (+x, +y) in image coordinates
          before = mag(x - 1, y - 1);
          after = mag(x + 1, y + 1);
          break;
        case 2:
          before = mag(x, y - 1);
          after = mag(x, y + 1);
          break;
        default:
          before = mag(x + 1, y - 1);
          after = mag(x - 1, y + 1);
          break;
      }
      if (m > before && m >= after) state[i] = m >= high ? 0 : 1;
    }
  }

  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state[i] == 0) {
      edges.data()[i] = 255;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (state[j] == 1 && edges.data()[j] == 0) {
          edges.data()[j] = 255;
          stack.push_back(j);
        }
      }
    }
  }
  return edges;
}

Gray8 canny(const Gray8& image, double low, double high) {
  GrayF f(image.width(), image.height());
  for (std::size_t i = 0; i < image.data().size(); ++i) f.data()[i] = image.data()[i] / 255.0f;
  return canny(f, low, high);
}

}  // namespace texbake
