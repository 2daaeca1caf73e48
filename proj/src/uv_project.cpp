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

#include "texbake/uv_project.hpp"

#include "edge_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace texbake {

Eigen::Vector2d texel_center_uv(int x, int y, int resolution) {
  return {(x + 0.5) / resolution, 1.0 - (y + 0.5) / resolution};
}

namespace {

using detail::edge_function;
using detail::owns_edge;

void rasterize_face(const TriMesh& mesh, std::int32_t face_index, TexelTable& table) {
  const Face& face = mesh.faces[face_index];
  const int res = table.resolution;
  std::array<Eigen::Vector2d, 3> p;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d& uv = mesh.uvs[face[k].uv];
    p[k] = {uv.x() * res, (1.0 - uv.y()) * res};
  }
  std::array<int, 3> order = {0, 1, 2};
  double area = (p[1].x() - p[0].x()) * (p[2].y() - p[0].y()) -
                (p[1].y() - p[0].y()) * (p[2].x() - p[0].x());
  if (area == 0.0) return;
  if (area < 0.0) {
    std::swap(order[1], order[2]);
    area = -area;
  }
  const Eigen::Vector2d& a = p[order[0]];
  const Eigen::Vector2d& b = p[order[1]];
  const Eigen::Vector2d& c = p[order[2]];
  const std::array<const Eigen::Vector2d*, 3> v = {&a, &b, &c};
  std::array<bool, 3> owned{};
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d d = *v[(k + 2) % 3] - *v[(k + 1) % 3];
    owned[k] = owns_edge(d.x(), d.y());
  }
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x(), b.x(), c.x()}))));
  const int x1 = std::min(res - 1, static_cast<int>(std::ceil(std::max({a.x(), b.x(), c.x()}))));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y(), b.y(), c.y()}))));
  const int y1 = std::min(res - 1, static_cast<int>(std::ceil(std::max({a.y(), b.y(), c.y()}))));

  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Eigen::Vector2d q(x + 0.5, y + 0.5);
      std::array<double, 3> e{};
      bool inside = true;
      for (int k = 0; k < 3 && inside; ++k) {
        const Eigen::Vector2d& s = *v[(k + 1) % 3];
        const Eigen::Vector2d& t = *v[(k + 2) % 3];
        e[k] = edge_function(s.x(), s.y(), t.x(), t.y(), q.x(), q.y());
        inside = e[k] > 0.0 || (e[k] == 0.0 && owned[k]);
      }
      if (!inside) continue;
      std::int32_t& slot = table.lookup[static_cast<std::size_t>(y) * res + x];
      if (slot >= 0) {
        ++table.overlap_texels;
        continue;
      }
      // Barycentrics back in the original corner order.
      std::array<double, 3> w{};
      for (int k = 0; k < 3; ++k) w[order[k]] = e[k] / area;
      TexelEntry entry;
      entry.x = x;
      entry.y = y;
      entry.face = face_index;
      entry.component = mesh.face_component.empty() ? 0 : mesh.face_component[face_index];
      entry.uv = texel_center_uv(x, y, res);
      entry.position = Eigen::Vector3d::Zero();
      entry.normal = Eigen::Vector3d::Zero();
      for (int k = 0; k < 3; ++k) {
        entry.position += w[k] * mesh.positions[face[k].position];
        entry.normal += w[k] * mesh.normals[face[k].normal];
      }
      const double len = entry.normal.norm();
      if (len > 0.0) {
        entry.normal /= len;
      } else {
        const Eigen::Vector3d& pa = mesh.positions[face[0].position];
        entry.normal = (mesh.positions[face[1].position] - pa)
                           .cross(mesh.positions[face[2].position] - pa)
                           .normalized();
      }
      slot = static_cast<std::int32_t>(table.entries.size());
      table.entries.push_back(entry);
    }
  }
}

}  // namespace

TexelTable rasterize_uv(const TriMesh& mesh, int resolution, int dilation) {
  if (resolution < 16) throw MeshError("texture resolution must be at least 16");
  double total_area = 0.0;
  for (const Face& face : mesh.faces) total_area += std::abs(uv_double_area(mesh, face));
  if (!(total_area > 0.0)) {
    throw MeshError("mesh '" + mesh.name + "' has zero total UV area");
  }

  TexelTable table;
  table.resolution = resolution;
  table.lookup.assign(static_cast<std::size_t>(resolution) * resolution, -1);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    rasterize_face(mesh, static_cast<std::int32_t>(f), table);
  }
  table.core_count = table.entries.size();

  // Edge neighbors first so the copy source is the nearest covered texel.
  static constexpr std::array<std::array<int, 2>, 8> kNeighbors = {
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};
  for (int ring = 0; ring < dilation; ++ring) {
    const std::vector<std::int32_t> before = table.lookup;
    for (int y = 0; y < resolution; ++y) {
      for (int x = 0; x < resolution; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * resolution + x;
        if (before[i] >= 0) continue;
        for (const auto& [dx, dy] : kNeighbors) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= resolution || ny >= resolution) continue;
          const std::int32_t source = before[static_cast<std::size_t>(ny) * resolution + nx];
          if (source < 0) continue;
          TexelEntry entry = table.entries[source];
          entry.x = x;
          entry.y = y;
          entry.uv = texel_center_uv(x, y, resolution);
          entry.dilated = true;
          table.lookup[i] = static_cast<std::int32_t>(table.entries.size());
          table.entries.push_back(entry);
          break;
        }
      }
    }
  }
  return table;
}

namespace {

// Depth of the surface stored at pixel (ix, iy), evaluated at the sub-pixel
// point (px, py) instead of the pixel center. Inverse depth is affine in
// screen space across one triangle, so its slope comes from neighbors that
// carry the same face; axes without such a neighbor get no correction.
double surface_depth(const GBuffer& g, int ix, int iy, double px, double py) {
  const std::size_t center = g.index(ix, iy);
  const std::int32_t face = g.face_id[center];
  const double inv = 1.0 / g.depth[center];
  auto slope = [&](int dx, int dy) {
    for (int s : {1, -1}) {
      const int nx = ix + s * dx;
      const int ny = iy + s * dy;
      if (nx < 0 || ny < 0 || nx >= g.width || ny >= g.height) continue;
      const std::size_t n = g.index(nx, ny);
      if (g.face_id[n] == face) return s * (1.0 / g.depth[n] - inv);
    }
    return 0.0;
  };
  const double at = inv + slope(1, 0) * (px - (ix + 0.5)) + slope(0, 1) * (py - (iy + 0.5));
  return at > 0.0 ? 1.0 / at : g.depth[center];
}

}  // namespace

std::vector<ViewSample> project_view(const TexelTable& texels, const Camera& camera,
                                     const Rgb8& frame, const GBuffer& gbuffer,
                                     const DepthTolerance& tolerance) {
  if (frame.width() != gbuffer.width || frame.height() != gbuffer.height) {
    throw std::invalid_argument("frame and G-buffer sizes differ");
  }
  if (gbuffer.width != camera.width || gbuffer.height != camera.height) {
    throw std::invalid_argument("G-buffer does not match the camera resolution");
  }
  // Bilinear taps only blend pixels of the same surface: covered and within
  // this relative depth band of the texel.
  constexpr double kTapBand = 1e-2;

  std::vector<ViewSample> samples(texels.entries.size());
  for (std::size_t i = 0; i < texels.entries.size(); ++i) {
    const TexelEntry& entry = texels.entries[i];
    ViewSample& sample = samples[i];
    sample.texel = static_cast<std::int32_t>(i);
    const std::optional<Projection> projection = project_point(camera, entry.position);
    if (!projection) continue;
    const double px = projection->x;
    const double py = projection->y;
    if (!(px >= 0.0 && py >= 0.0 && px < gbuffer.width && py < gbuffer.height)) continue;
    const int ix = static_cast<int>(px);
    const int iy = static_cast<int>(py);
    const std::size_t pixel = gbuffer.index(ix, iy);
    if (gbuffer.face_id[pixel] == kNoFace) continue;
    const double reference = surface_depth(gbuffer, ix, iy, px, py);
    if (std::abs(projection->depth - reference) >
        tolerance.relative * reference + tolerance.absolute) {
      continue;
    }

    const double fx = px - 0.5;
    const double fy = py - 0.5;
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const double tx = fx - x0;
    const double ty = fy - y0;
    Eigen::Vector3d color = Eigen::Vector3d::Zero();
    double total = 0.0;
    for (int dy = 0; dy <= 1; ++dy) {
      for (int dx = 0; dx <= 1; ++dx) {
        const int sx = x0 + dx;
        const int sy = y0 + dy;
        if (sx < 0 || sy < 0 || sx >= gbuffer.width || sy >= gbuffer.height) continue;
        const std::size_t tap = gbuffer.index(sx, sy);
        if (gbuffer.face_id[tap] == kNoFace) continue;
        if (std::abs(gbuffer.depth[tap] - projection->depth) > kTapBand * projection->depth) continue;
        const double weight = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty);
        if (weight <= 0.0) continue;
        const std::uint8_t* p = frame.at(sx, sy);
        color += weight * Eigen::Vector3d(p[0], p[1], p[2]);
        total += weight;
      }
    }
    if (total > 0.0) {
      color /= 255.0 * total;
    } else {
      const std::uint8_t* p = frame.at(ix, iy);
      color = Eigen::Vector3d(p[0], p[1], p[2]) / 255.0;
    }
    sample.visible = true;
    sample.color = color.cast<float>();
    const double cosine = entry.normal.dot(view_direction(camera, entry.position));
    sample.w = std::clamp(cosine, 0.0, 1.0);
  }
  return samples;
}

Gray8 confidence_image(const TexelTable& texels, std::span<const ViewSample> samples) {
  Gray8 out(texels.resolution, texels.resolution, 0);
  for (const ViewSample& s : samples) {
    if (!s.visible) continue;
    const TexelEntry& entry = texels.entries[s.texel];
    out(entry.x, entry.y) = to_byte(s.w);
  }
  return out;
}

}  // namespace texbake
