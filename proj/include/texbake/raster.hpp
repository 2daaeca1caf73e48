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
#include <filesystem>
#include <limits>
#include <string_view>
#include <vector>

#include <Eigen/Geometry>

#include "texbake/camera.hpp"
#include "texbake/image.hpp"
#include "texbake/mesh.hpp"

namespace texbake {

inline constexpr std::int32_t kNoFace = -1;

// Per-view raster outputs. Depth is view-space distance along the camera
// axis (+inf where empty); normals are world-space unit vectors; bary holds
// perspective-correct barycentrics of the visible face's three corners.
struct GBuffer {
  int width = 0;
  int height = 0;
  std::vector<float> depth;
  std::vector<Eigen::Vector3f> normal;
  std::vector<std::int32_t> face_id;
  std::vector<Eigen::Vector3f> bary;

  GBuffer() = default;
  GBuffer(int w, int h);

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool covered(int x, int y) const { return face_id[index(x, y)] != kNoFace; }
  std::size_t covered_count() const;
};

// Depth-tested rasterization, nearest surface wins, no back-face culling.
// Triangles are clipped against the near and far planes.
GBuffer rasterize(const TriMesh& mesh, const Camera& camera);

enum class EdgeSource { kDepth, kNormal, kRender };

struct EdgeOptions {
  EdgeSource source = EdgeSource::kDepth;
  double low = 0.05;
  double high = 0.15;
};

struct ConditionMaps {
  Rgb8 normal_map;
  Gray8 depth_map;
  Gray8 edge_map;
  Gray8 render;  // flat headlight preview, black background
};

ConditionMaps condition_maps(const GBuffer& gbuffer, const Camera& camera,
                             const EdgeOptions& edges = {});

Rgb8 encode_normals(const GBuffer& gbuffer);
// Per-frame min-max normalization over covered pixels, near = 255.
Gray8 encode_depth(const GBuffer& gbuffer);
Gray8 shade_headlight(const GBuffer& gbuffer, const Camera& camera);
// Covered pixels with at least one empty 4-neighbor.
Gray8 coverage_silhouette(const GBuffer& gbuffer);

// Canny edge detector on a [0,1] image: Gaussian blur (sigma 1.4), Sobel
// gradients, non-maximum suppression, hysteresis. Gradient magnitude is
// scaled so that an unblurred unit step has magnitude 1; thresholds are in
// that unit. Output pixels are 0 or 255.
Gray8 canny(const GrayF& image, double low, double high);
Gray8 canny(const Gray8& image, double low, double high);

// Raw depth dump: "TBDP", width, height, reserved (little-endian u32), then
// width*height little-endian float32 values, row-major.
void write_depth_binary(const std::filesystem::path& path, const GBuffer& gbuffer);
std::vector<float> read_depth_binary(const std::filesystem::path& path, int* width, int* height);

EdgeSource parse_edge_source(std::string_view name);

}  // namespace texbake
