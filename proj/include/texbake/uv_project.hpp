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
#include <span>
#include <vector>

#include <Eigen/Geometry>

#include "texbake/camera.hpp"
#include "texbake/image.hpp"
#include "texbake/mesh.hpp"
#include "texbake/raster.hpp"

namespace texbake {

// Surface sample behind one texel of the atlas.
struct TexelEntry {
  int x = 0;  // texel column; row 0 is the top of the texture image
  int y = 0;
  Eigen::Vector3d position;
  Eigen::Vector3d normal;
  std::int32_t face = 0;
  std::int32_t component = 0;
  Eigen::Vector2d uv;  // texel-center UV
  bool dilated = false;  // copied from a neighbor in the seam guard band
};

struct TexelTable {
  int resolution = 0;
  std::vector<TexelEntry> entries;
  std::vector<std::int32_t> lookup;  // resolution^2, -1 where uncovered
  std::size_t overlap_texels = 0;    // texel centers claimed by more than one face
  std::size_t core_count = 0;        // entries that are not dilated

  std::int32_t at(int x, int y) const {
    return lookup[static_cast<std::size_t>(y) * resolution + x];
  }
};

// Texel-center UV for texel (x, y) at a given resolution.
Eigen::Vector2d texel_center_uv(int x, int y, int resolution);

// Rasterizes every UV triangle at texel centers; first face wins on overlap.
// The covered region is then grown by `dilation` texels, each new texel
// copying its nearest covered neighbor. Throws MeshError when the atlas has
// no UV area or resolution < 16.
TexelTable rasterize_uv(const TriMesh& mesh, int resolution, int dilation = 2);

struct ViewSample {
  std::int32_t texel = 0;
  Eigen::Vector3f color = Eigen::Vector3f::Zero();
  double w = 0.0;
  bool visible = false;
};

struct DepthTolerance {
  double relative = 1e-3;
  double absolute = 0.0;  // model units
};

// Projects every texel into one view. A texel is visible when it lands in
// the image on a covered pixel whose depth agrees with its own within
// tolerance; visible texels sample the frame bilinearly and get
// w = max(0, n . view direction).
std::vector<ViewSample> project_view(const TexelTable& texels, const Camera& camera,
                                     const Rgb8& frame, const GBuffer& gbuffer,
                                     const DepthTolerance& tolerance = {});

// Per-view confidence as an 8-bit image (w * 255), zero where not visible.
Gray8 confidence_image(const TexelTable& texels, std::span<const ViewSample> samples);

}  // namespace texbake
