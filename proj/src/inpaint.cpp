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

#include "texbake/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "texbake/base64.hpp"

namespace texbake {

ComponentLabelMap ComponentLabelMap::from_texels(const TexelTable& texels) {
  ComponentLabelMap map;
  map.resolution = texels.resolution;
  map.labels.assign(static_cast<std::size_t>(texels.resolution) * texels.resolution, kEmptyLabel);
  for (const TexelEntry& e : texels.entries) {
    map.labels[static_cast<std::size_t>(e.y) * texels.resolution + e.x] = e.component;
    map.component_count = std::max(map.component_count, e.component + 1);
  }
  return map;
}

std::size_t OcclusionMask::count() const {
  return static_cast<std::size_t>(std::count(needs_fill.begin(), needs_fill.end(), 1));
}

Gray8 OcclusionMask::image() const {
  Gray8 out(resolution, resolution, 0);
  for (std::size_t i = 0; i < needs_fill.size(); ++i) out.data()[i] = needs_fill[i] ? 255 : 0;
  return out;
}

OcclusionMask occlusion_mask(const BlendAccumulator& acc, const ComponentLabelMap& labels,
                             double tau) {
  if (acc.resolution() != labels.resolution) {
    throw std::invalid_argument("occlusion mask: accumulator and label map resolutions differ");
  }
  OcclusionMask mask;
  mask.resolution = labels.resolution;
  mask.needs_fill.assign(labels.labels.size(), 0);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const std::size_t pixel = static_cast<std::size_t>(acc.y(i)) * labels.resolution + acc.x(i);
    if (labels.labels[pixel] == kEmptyLabel) continue;
    if (acc.sums(i).weight < tau) mask.needs_fill[pixel] = 1;
  }
  return mask;
}

namespace {

void check_shapes(const BakedTexture& texture, const OcclusionMask& mask,
                  const ComponentLabelMap& labels) {
  if (texture.resolution != mask.resolution || texture.resolution != labels.resolution) {
    throw std::invalid_argument("inpaint: texture, mask and labels differ in resolution");
  }
}

}  // namespace

BakedTexture inpaint_diffuse(const BakedTexture& texture, const OcclusionMask& mask,
                             const ComponentLabelMap& labels, const InpaintOptions& options,
                             InpaintReport* report) {
  check_shapes(texture, mask, labels);
  const int res = texture.resolution;
  const std::size_t n = static_cast<std::size_t>(res) * res;
  InpaintReport local;

  // Seeds: filled texels outside the mask.
  std::vector<std::uint8_t> known(n, 0);
  std::vector<std::size_t> targets;
  const int component_count = labels.component_count;
  std::vector<Eigen::Vector3d> seed_sum(component_count, Eigen::Vector3d::Zero());
  std::vector<std::size_t> seed_count(component_count, 0);
  Eigen::Vector3d global_sum = Eigen::Vector3d::Zero();
  std::size_t global_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t label = labels.labels[i];
    if (mask.needs_fill[i]) {
      if (label != kEmptyLabel) targets.push_back(i);
      continue;
    }
    if (texture.filled_mask.data()[i] == 0) continue;
    known[i] = 1;
    const Eigen::Vector3d c(texture.color.data()[3 * i], texture.color.data()[3 * i + 1],
                            texture.color.data()[3 * i + 2]);
    global_sum += c;
    ++global_count;
    if (label != kEmptyLabel) {
      seed_sum[label] += c;
      ++seed_count[label];
    }
  }
  local.masked = targets.size();

  BakedTexture out = texture;
  std::vector<float> current(out.color.data().begin(), out.color.data().end());
  std::vector<float> next = current;

  std::set<int> seedless;
  std::vector<std::size_t> active;
  for (std::size_t i : targets) {
    if (seed_count[labels.labels[i]] == 0) {
      seedless.insert(labels.labels[i]);
    } else {
      active.push_back(i);
    }
  }

  std::vector<std::uint8_t> known_next = known;
  for (int iter = 0; iter < options.max_iters && !active.empty(); ++iter) {
    double max_change = 0.0;
    bool grew = false;
    for (std::size_t i : active) {
      const int x = static_cast<int>(i % res);
      const int y = static_cast<int>(i / res);
      const std::int32_t label = labels.labels[i];
      double sum[3] = {0.0, 0.0, 0.0};
      int count = 0;
      const int neighbors[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
      for (const auto& nb : neighbors) {
        if (nb[0] < 0 || nb[1] < 0 || nb[0] >= res || nb[1] >= res) continue;
        const std::size_t j = static_cast<std::size_t>(nb[1]) * res + nb[0];
        if (!known[j] || labels.labels[j] != label) continue;
        for (int c = 0; c < 3; ++c) sum[c] += current[3 * j + c];
        ++count;
      }
      if (count == 0) continue;
      for (int c = 0; c < 3; ++c) {
        const float value = static_cast<float>(sum[c] / count);
        if (known[i]) max_change = std::max(max_change, std::abs(static_cast<double>(value) - current[3 * i + c]));
        next[3 * i + c] = value;
      }
      if (!known[i]) {
        known_next[i] = 1;
        grew = true;
      }
    }
    for (std::size_t i : active) {
      for (int c = 0; c < 3; ++c) current[3 * i + c] = next[3 * i + c];
      known[i] = known_next[i];
    }
    local.iterations = iter + 1;
    if (!grew && max_change < options.tol) {
      local.converged = true;
      break;
    }
  }
  if (active.empty()) local.converged = true;

  const Eigen::Vector3d global_mean =
      global_count > 0 ? Eigen::Vector3d(global_sum / global_count) : Eigen::Vector3d::Zero();
  for (std::size_t i : targets) {
    const std::int32_t label = labels.labels[i];
    Eigen::Vector3d fill;
    if (seed_count[label] == 0) {
      fill = global_mean;
    } else if (!known[i]) {
      fill = seed_sum[label] / seed_count[label];
      ++local.unreachable;
    } else {
      fill = {current[3 * i], current[3 * i + 1], current[3 * i + 2]};
    }
    for (int c = 0; c < 3; ++c) out.color.data()[3 * i + c] = static_cast<float>(fill[c]);
    out.filled_mask.data()[i] = 255;
    ++local.inpainted;
  }
  local.seedless_components.assign(seedless.begin(), seedless.end());
  if (report != nullptr) *report = local;
  return out;
}

std::array<std::uint8_t, 3> component_color(int id) {
  // Golden-angle hue walk; value alternates so neighbors in id differ in
  // brightness as well as hue.
  const double hue = std::fmod(id * 137.50776405003785, 360.0);
  const double saturation = 0.85;
  const double value = (id % 2 == 0) ? 0.95 : 0.7;
  const double c = value * saturation;
  const double h = hue / 60.0;
  const double xcomp = c * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h) % 6) {
    case 0: r = c; g = xcomp; break;
    case 1: r = xcomp; g = c; break;
    case 2: g = c; b = xcomp; break;
    case 3: g = xcomp; b = c; break;
    case 4: r = xcomp; b = c; break;
    default: r = c; b = xcomp; break;
  }
  const double m = value - c;
  return {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

Rgb8 render_component_map(const ComponentLabelMap& labels) {
  Rgb8 out(labels.resolution, labels.resolution, 0);
  for (int y = 0; y < labels.resolution; ++y) {
    for (int x = 0; x < labels.resolution; ++x) {
      const std::int32_t label = labels.at(x, y);
      if (label == kEmptyLabel) continue;
      const auto color = component_color(label);
      std::uint8_t* p = out.at(x, y);
      p[0] = color[0];
      p[1] = color[1];
      p[2] = color[2];
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_component_png(const ComponentLabelMap& labels) {
  const int palette_ids = std::min(labels.component_count, 255);
  std::vector<std::array<std::uint8_t, 3>> palette;
  palette.push_back({0, 0, 0});
  for (int id = 0; id < palette_ids; ++id) palette.push_back(component_color(id));
  Gray8 indices(labels.resolution, labels.resolution, 0);
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    if (labels.labels[i] != kEmptyLabel) {
      indices.data()[i] = static_cast<std::uint8_t>(1 + labels.labels[i] % 255);
    }
  }
  return encode_png_indexed(indices, palette);
}

nlohmann::json encode_inpaint_request(const BakedTexture& texture, const OcclusionMask& mask,
                                      const ComponentLabelMap& labels,
                                      const RemoteInpaintRequest& request) {
  check_shapes(texture, mask, labels);
  nlohmann::json body;
  body["prompt"] = request.prompt;
  body["strength"] = request.strength;
  body["width"] = texture.resolution;
  body["height"] = texture.resolution;
  body["texture"] = base64_encode(encode_png(export_texture(texture, false)));
  body["mask"] = base64_encode(encode_png_1bit(mask.image()));
  body["components"] = base64_encode(encode_component_png(labels));
  return body;
}

BakedTexture inpaint_remote(const BakedTexture& texture, const OcclusionMask& mask,
                            const ComponentLabelMap& labels, const RemoteInpaintRequest& request,
                            const Endpoint& endpoint, const RemoteOptions& options,
                            InpaintReport* report) {
  const nlohmann::json reply =
      post_json(endpoint, "/v1/inpaint", encode_inpaint_request(texture, mask, labels, request), options);
  if (!reply.is_object() || !reply.contains("texture") || !reply.at("texture").is_string()) {
    throw RemoteError(RemoteError::Kind::kMalformed, "inpaint reply lacks a texture string");
  }
  Rgb8 filled;
  try {
    filled = rgb_from_png_base64(reply.at("texture").get<std::string>());
  } catch (const std::exception& e) {
    throw RemoteError(RemoteError::Kind::kMalformed, std::string("inpaint texture is not a base64 PNG: ") + e.what());
  }
  if (filled.width() != texture.resolution || filled.height() != texture.resolution) {
    throw RemoteError(RemoteError::Kind::kMalformed, "inpaint reply size does not match the texture");
  }
  BakedTexture out = texture;
  InpaintReport local;
  for (int y = 0; y < texture.resolution; ++y) {
    for (int x = 0; x < texture.resolution; ++x) {
      if (!mask.at(x, y)) continue;
      ++local.masked;
      const std::uint8_t* p = filled.at(x, y);
      float* c = out.color.at(x, y);
      for (int k = 0; k < 3; ++k) c[k] = p[k] / 255.0f;
      out.filled_mask(x, y) = 255;
      ++local.inpainted;
    }
  }
  local.converged = true;
  if (report != nullptr) *report = local;
  return out;
}

}  // namespace texbake
