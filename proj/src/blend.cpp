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

#include "texbake/blend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace texbake {

BlendAccumulator::BlendAccumulator(const TexelTable& texels, double alpha)
    : alpha_(alpha), resolution_(texels.resolution), sums_(texels.entries.size()) {
  if (!(alpha >= 1.0)) throw std::invalid_argument("blend exponent alpha must be >= 1");
  coords_.reserve(texels.entries.size());
  for (const TexelEntry& e : texels.entries) coords_.push_back({e.x, e.y});
}

void BlendAccumulator::accumulate(std::span<const ViewSample> samples) {
  for (const ViewSample& s : samples) {
    if (s.texel < 0 || static_cast<std::size_t>(s.texel) >= sums_.size()) {
      throw std::out_of_range("view sample texel index " + std::to_string(s.texel) +
                              " outside the texel table");
    }
    if (!s.visible) continue;
    TexelSums& t = sums_[s.texel];
    const double w = s.w;
    const double w_final = std::pow(w, alpha_);
    t.weight += w_final;
    t.weight_sq += w_final * w_final;
    t.raw_weight += w;
    t.color += w_final * s.color.cast<double>();
    ++t.samples;
    if (w > t.top_w) {
      t.second_w = t.top_w;
      t.top_w = w;
      t.top_color = s.color;
    } else if (w > t.second_w) {
      t.second_w = w;
    }
  }
}

std::optional<Eigen::Vector3d> BlendAccumulator::blended(std::size_t texel) const {
  const TexelSums& t = sums_.at(texel);
  if (!(t.weight > 0.0)) return std::nullopt;
  return Eigen::Vector3d(t.color / t.weight);
}

std::size_t BakedTexture::filled_count() const {
  return static_cast<std::size_t>(std::count_if(filled_mask.data().begin(), filled_mask.data().end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

BakedTexture finalize(const BlendAccumulator& acc) {
  const int res = acc.resolution();
  BakedTexture out;
  out.resolution = res;
  out.color = RgbF(res, res);
  for (int y = 0; y < res; ++y) {
    for (int x = 0; x < res; ++x) {
      float* p = out.color.at(x, y);
      p[0] = kUnfilledColor[0];
      p[1] = kUnfilledColor[1];
      p[2] = kUnfilledColor[2];
    }
  }
  out.filled_mask = Gray8(res, res, 0);
  out.confidence = GrayF(res, res, 0.0f);

  double max_weight = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) max_weight = std::max(max_weight, acc.sums(i).weight);

  for (std::size_t i = 0; i < acc.size(); ++i) {
    const auto& t = acc.sums(i);
    const int x = acc.x(i);
    const int y = acc.y(i);
    if (max_weight > 0.0) {
      out.confidence(x, y) = static_cast<float>(std::min(1.0, t.weight / max_weight));
    }
    if (!(t.weight > kFillEpsilon)) continue;
    const Eigen::Vector3d c = t.color / t.weight;
    float* p = out.color.at(x, y);
    for (int k = 0; k < 3; ++k) p[k] = static_cast<float>(c[k]);
    out.filled_mask(x, y) = 255;
  }
  return out;
}

double effective_view_count(const BlendAccumulator& acc, std::size_t texel) {
  const auto& t = acc.sums(texel);
  if (!(t.weight > 0.0) || !(t.weight_sq > 0.0)) return 0.0;
  return t.weight * t.weight / t.weight_sq;
}

double mean_effective_view_count(const BlendAccumulator& acc) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (!(acc.sums(i).weight > 0.0)) continue;
    sum += effective_view_count(acc, i);
    ++count;
  }
  return count == 0 ? 0.0 : sum / count;
}

Rgb8 export_texture(const BakedTexture& texture, bool debug) {
  Rgb8 out(texture.resolution, texture.resolution, 0);
  for (int y = 0; y < texture.resolution; ++y) {
    for (int x = 0; x < texture.resolution; ++x) {
      std::uint8_t* p = out.at(x, y);
      if (!texture.filled(x, y)) {
        if (debug) {
          p[0] = 255;
          p[1] = 0;
          p[2] = 255;
        }
        continue;
      }
      const float* c = texture.color.at(x, y);
      for (int k = 0; k < 3; ++k) p[k] = to_byte(c[k]);
    }
  }
  return out;
}

Gray8 export_confidence(const BakedTexture& texture) {
  Gray8 out(texture.resolution, texture.resolution, 0);
  for (int y = 0; y < texture.resolution; ++y) {
    for (int x = 0; x < texture.resolution; ++x) out(x, y) = to_byte(texture.confidence(x, y));
  }
  return out;
}

}  // namespace texbake
