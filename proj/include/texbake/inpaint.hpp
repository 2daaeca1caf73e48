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
#include <string>
#include <vector>

#include <json.hpp>

#include "texbake/blend.hpp"
#include "texbake/remote.hpp"
#include "texbake/uv_project.hpp"

namespace texbake {

inline constexpr std::int32_t kEmptyLabel = -1;

struct ComponentLabelMap {
  int resolution = 0;
  std::vector<std::int32_t> labels;  // kEmptyLabel where the atlas is uncovered
  int component_count = 0;

  std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * resolution + x]; }
  static ComponentLabelMap from_texels(const TexelTable& texels);
};

struct OcclusionMask {
  int resolution = 0;
  std::vector<std::uint8_t> needs_fill;  // 1 where the texel must be inpainted

  bool at(int x, int y) const { return needs_fill[static_cast<std::size_t>(y) * resolution + x] != 0; }
  std::size_t count() const;
  Gray8 image() const;  // 255 where needs-fill
};

// Labeled texels whose accumulated w^alpha weight is below tau.
OcclusionMask occlusion_mask(const BlendAccumulator& acc, const ComponentLabelMap& labels,
                             double tau = 1e-6);

struct InpaintOptions {
  int max_iters = 4096;
  double tol = 1.0 / 512.0;
};

struct InpaintReport {
  std::size_t masked = 0;
  std::size_t inpainted = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<int> seedless_components;
  // Masked texels of seeded components with no 4-connected path to a seed;
  // these receive their component's mean seed color.
  std::size_t unreachable = 0;
};

// Label-constrained harmonic fill by Jacobi iteration. A masked texel averages
// its 4-neighbors that share its component label and are already filled.
// Unmasked texels are never modified.
BakedTexture inpaint_diffuse(const BakedTexture& texture, const OcclusionMask& mask,
                             const ComponentLabelMap& labels, const InpaintOptions& options = {},
                             InpaintReport* report = nullptr);

struct RemoteInpaintRequest {
  std::string prompt;
  double strength = 0.5;
};

nlohmann::json encode_inpaint_request(const BakedTexture& texture, const OcclusionMask& mask,
                                      const ComponentLabelMap& labels,
                                      const RemoteInpaintRequest& request);

// Client of POST /v1/inpaint. Only masked texels are taken from the reply.
BakedTexture inpaint_remote(const BakedTexture& texture, const OcclusionMask& mask,
                            const ComponentLabelMap& labels, const RemoteInpaintRequest& request,
                            const Endpoint& endpoint, const RemoteOptions& options = {},
                            InpaintReport* report = nullptr);

// Palette entry for a component id: golden-angle hue rotation, never black.
std::array<std::uint8_t, 3> component_color(int id);
Rgb8 render_component_map(const ComponentLabelMap& labels);
// Indexed PNG: index 0 is black (empty), index 1 + (id mod 255) the component.
std::vector<std::uint8_t> encode_component_png(const ComponentLabelMap& labels);

}  // namespace texbake
