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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Geometry>

#include "texbake/image.hpp"
#include "texbake/uv_project.hpp"

namespace texbake {

// Texels whose accumulated weight does not exceed this stay unfilled.
inline constexpr double kFillEpsilon = 1e-8;

// Running per-texel sums for confidence-weighted blending. Each visible
// sample contributes w^alpha to the weight sum and w^alpha * color to the
// color sum. Sums are kept in double precision.
class BlendAccumulator {
 public:
  struct TexelSums {
    double weight = 0.0;       // sum of w^alpha
    double weight_sq = 0.0;    // sum of (w^alpha)^2
    double raw_weight = 0.0;   // sum of w
    Eigen::Vector3d color = Eigen::Vector3d::Zero();
    int samples = 0;
    // Strongest and second-strongest raw weights, and the color of the
    // strongest view.
    double top_w = -1.0;
    double second_w = -1.0;
    Eigen::Vector3f top_color = Eigen::Vector3f::Zero();
  };

  BlendAccumulator(const TexelTable& texels, double alpha);

  // Throws std::out_of_range on a texel index outside the table.
  void accumulate(std::span<const ViewSample> samples);

  double alpha() const { return alpha_; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return sums_.size(); }
  const TexelSums& sums(std::size_t texel) const { return sums_.at(texel); }
  // Texel coordinates of entry i in the texture image.
  int x(std::size_t texel) const { return coords_[texel][0]; }
  int y(std::size_t texel) const { return coords_[texel][1]; }

  // color_sum / weight_sum without the fill threshold; nullopt at zero weight.
  std::optional<Eigen::Vector3d> blended(std::size_t texel) const;

 private:
  double alpha_;
  int resolution_;
  std::vector<std::array<int, 2>> coords_;
  std::vector<TexelSums> sums_;
};

inline const Eigen::Vector3f kUnfilledColor(1.0f, 0.0f, 1.0f);  // magenta

struct BakedTexture {
  int resolution = 0;
  RgbF color;          // kUnfilledColor where not filled
  Gray8 filled_mask;   // 255 where filled
  GrayF confidence;    // weight_sum / max weight_sum, in [0,1]

  bool filled(int x, int y) const { return filled_mask(x, y) != 0; }
  std::size_t filled_count() const;
};

BakedTexture finalize(const BlendAccumulator& acc);

// Inverse participation ratio of the w^alpha weights at one texel:
// (sum w)^2 / sum w^2; 0 when nothing contributed.
double effective_view_count(const BlendAccumulator& acc, std::size_t texel);

// Mean effective view count over texels with positive weight.
double mean_effective_view_count(const BlendAccumulator& acc);

// 8-bit export. Unfilled texels become magenta when `debug`, black otherwise.
Rgb8 export_texture(const BakedTexture& texture, bool debug);
Gray8 export_confidence(const BakedTexture& texture);

}  // namespace texbake
