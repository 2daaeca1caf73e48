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

#include "texbake/raster.hpp"

#include "edge_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include <Eigen/Geometry>

namespace texbake {

GBuffer::GBuffer(int w, int h)
    : width(w),
      height(h),
      depth(static_cast<std::size_t>(w) * h, std::numeric_limits<float>::infinity()),
      normal(static_cast<std::size_t>(w) * h, Eigen::Vector3f::Zero()),
      face_id(static_cast<std::size_t>(w) * h, kNoFace),
      bary(static_cast<std::size_t>(w) * h, Eigen::Vector3f::Zero()) {}

std::size_t GBuffer::covered_count() const {
  return static_cast<std::size_t>(
      std::count_if(face_id.begin(), face_id.end(), [](std::int32_t f) { return f != kNoFace; }));
}

namespace {

// Clip-space polygon vertex carrying the barycentric weights of the source
// triangle corners.
struct ClipVertex {
  Eigen::Vector3d view;  // view-space position, camera looks down -z
  Eigen::Vector3d weights;
};

using Polygon = std::vector<ClipVertex>;

// Keeps the part of the polygon where signed(v) >= 0.
template <typename Signed>
Polygon clip_polygon(const Polygon& in, Signed signed_distance) {
  Polygon out;
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    const ClipVertex& a = in[i];
    const ClipVertex& b = in[(i + 1) % n];
    const double da = signed_distance(a);
    const double db = signed_distance(b);
    if (da >= 0.0) out.push_back(a);
    if ((da >= 0.0) != (db >= 0.0)) {
      const double t = da / (da - db);
      out.push_back({a.view + t * (b.view - a.view), a.weights + t * (b.weights - a.weights)});
    }
  }
  return out;
}

struct ScreenVertex {
  double x;
  double y;
  double depth;
  Eigen::Vector3d weights;
};

// Half-open ownership of shared edges: exactly one of d and -d passes.
using detail::edge_function;
using detail::owns_edge;

class TriangleRasterizer {
 public:
  TriangleRasterizer(const TriMesh& mesh, const Camera& camera, GBuffer& out)
      : mesh_(mesh), camera_(camera), out_(out) {
    view_ = camera.view_matrix();
    projection_ = camera.projection_matrix();
  }

  void draw(std::int32_t face_index) {
    const Face& face = mesh_.faces[face_index];
    Polygon polygon(3);
    for (int k = 0; k < 3; ++k) {
      polygon[k].view = (view_ * mesh_.positions[face[k].position].homogeneous()).head<3>();
      polygon[k].weights = Eigen::Vector3d::Unit(k);
    }
    const double near = camera_.near;
    const double far = camera_.far;
    polygon = clip_polygon(polygon, [near](const ClipVertex& v) { return -v.view.z() - near; });
    if (polygon.size() < 3) return;
    polygon = clip_polygon(polygon, [far](const ClipVertex& v) { return far + v.view.z(); });
    if (polygon.size() < 3) return;

    std::vector<ScreenVertex> screen;
    screen.reserve(polygon.size());
    for (const ClipVertex& v : polygon) {
      const Eigen::Vector4d clip = projection_ * v.view.homogeneous();
      const double depth = clip.w();
      screen.push_back({0.5 * (clip.x() / depth + 1.0) * camera_.width,
                        0.5 * (1.0 - clip.y() / depth) * camera_.height, depth, v.weights});
    }
    for (std::size_t i = 1; i + 1 < screen.size(); ++i) {
      fill(face_index, screen[0], screen[i], screen[i + 1]);
    }
  }

 private:
  void fill(std::int32_t face_index, ScreenVertex a, ScreenVertex b, ScreenVertex c) {
    double area = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (area == 0.0 || !std::isfinite(area)) return;
    if (area < 0.0) {
      std::swap(b, c);
      area = -area;
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}))));
    const int x1 = std::min(out_.width - 1, static_cast<int>(std::ceil(std::max({a.x, b.x, c.x}))));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}))));
    const int y1 = std::min(out_.height - 1, static_cast<int>(std::ceil(std::max({a.y, b.y, c.y}))));
    if (x0 > x1 || y0 > y1) return;

    const std::array<const ScreenVertex*, 3> v = {&a, &b, &c};
    // Edge k is opposite vertex k and runs v[k+1] -> v[k+2].
    std::array<bool, 3> owned{};
    for (int k = 0; k < 3; ++k) {
      const ScreenVertex& p = *v[(k + 1) % 3];
      const ScreenVertex& q = *v[(k + 2) % 3];
      owned[k] = owns_edge(q.x - p.x, q.y - p.y);
    }
    const Face& face = mesh_.faces[face_index];
    for (int y = y0; y <= y1; ++y) {
      const double py = y + 0.5;
      for (int x = x0; x <= x1; ++x) {
        const double px = x + 0.5;
        std::array<double, 3> e{};
        bool inside = true;
        for (int k = 0; k < 3 && inside; ++k) {
          const ScreenVertex& p = *v[(k + 1) % 3];
          const ScreenVertex& q = *v[(k + 2) % 3];
          e[k] = edge_function(p.x, p.y, q.x, q.y, px, py);
          inside = e[k] > 0.0 || (e[k] == 0.0 && owned[k]);
        }
        if (!inside) continue;
        // Screen-space barycentrics -> perspective-correct weights.
        const double q0 = e[0] / (area * a.depth);
        const double q1 = e[1] / (area * b.depth);
        const double q2 = e[2] / (area * c.depth);
        const double inv_depth = q0 + q1 + q2;
        const double depth = 1.0 / inv_depth;
        if (depth < camera_.near || depth > camera_.far) continue;
        const std::size_t idx = out_.index(x, y);
        if (!(depth < out_.depth[idx])) continue;
        Eigen::Vector3d w = (q0 * a.weights + q1 * b.weights + q2 * c.weights) * depth;
        w = w.cwiseMax(0.0);
        w /= w.sum();
        Eigen::Vector3d n = w[0] * mesh_.normals[face[0].normal] +
                            w[1] * mesh_.normals[face[1].normal] +
                            w[2] * mesh_.normals[face[2].normal];
        const double len = n.norm();
        if (len > 0.0) n /= len;
        out_.depth[idx] = static_cast<float>(depth);
        out_.face_id[idx] = face_index;
        out_.bary[idx] = w.cast<float>();
        out_.normal[idx] = n.cast<float>();
      }
    }
  }

  const TriMesh& mesh_;
  const Camera& camera_;
  GBuffer& out_;
  Eigen::Matrix4d view_;
  Eigen::Matrix4d projection_;
};

}  // namespace

GBuffer rasterize(const TriMesh& mesh, const Camera& camera) {
  camera.check();
  GBuffer out(camera.width, camera.height);
  TriangleRasterizer rasterizer(mesh, camera, out);
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    rasterizer.draw(static_cast<std::int32_t>(f));
  }
  return out;
}

Rgb8 encode_normals(const GBuffer& gbuffer) {
  Rgb8 out(gbuffer.width, gbuffer.height, 128);
  for (int y = 0; y < gbuffer.height; ++y) {
    for (int x = 0; x < gbuffer.width; ++x) {
      const std::size_t i = gbuffer.index(x, y);
      if (gbuffer.face_id[i] == kNoFace) continue;
      std::uint8_t* p = out.at(x, y);
      for (int c = 0; c < 3; ++c) p[c] = to_byte(0.5 * gbuffer.normal[i][c] + 0.5);
    }
  }
  return out;
}

Gray8 encode_depth(const GBuffer& gbuffer) {
  Gray8 out(gbuffer.width, gbuffer.height, 0);
  float near = std::numeric_limits<float>::infinity();
  float far = -near;
  for (std::size_t i = 0; i < gbuffer.depth.size(); ++i) {
    if (gbuffer.face_id[i] == kNoFace) continue;
    near = std::min(near, gbuffer.depth[i]);
    far = std::max(far, gbuffer.depth[i]);
  }
  const double range = static_cast<double>(far) - near;
  for (int y = 0; y < gbuffer.height; ++y) {
    for (int x = 0; x < gbuffer.width; ++x) {
      const std::size_t i = gbuffer.index(x, y);
      if (gbuffer.face_id[i] == kNoFace) continue;
      const double v = range > 0.0 ? (far - gbuffer.depth[i]) / range : 1.0;
      out(x, y) = to_byte(v);
    }
  }
  return out;
}

Gray8 shade_headlight(const GBuffer& gbuffer, const Camera& camera) {
  Gray8 out(gbuffer.width, gbuffer.height, 0);
  for (int y = 0; y < gbuffer.height; ++y) {
    for (int x = 0; x < gbuffer.width; ++x) {
      const std::size_t i = gbuffer.index(x, y);
      if (gbuffer.face_id[i] == kNoFace) continue;
      const Eigen::Vector3d point = unproject(camera, x + 0.5, y + 0.5, gbuffer.depth[i]);
      const Eigen::Vector3d to_camera = (camera.position - point).normalized();
      const double lambert = std::abs(gbuffer.normal[i].cast<double>().dot(to_camera));
      out(x, y) = to_byte(0.1 + 0.9 * lambert);
    }
  }
  return out;
}

Gray8 coverage_silhouette(const GBuffer& gbuffer) {
  Gray8 out(gbuffer.width, gbuffer.height, 0);
  static constexpr std::array<std::array<int, 2>, 4> kNeighbors = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (int y = 0; y < gbuffer.height; ++y) {
    for (int x = 0; x < gbuffer.width; ++x) {
      if (!gbuffer.covered(x, y)) continue;
      for (const auto& [dx, dy] : kNeighbors) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= gbuffer.width || ny >= gbuffer.height) continue;
        if (!gbuffer.covered(nx, ny)) {
          out(x, y) = 255;
          break;
        }
      }
    }
  }
  return out;
}

ConditionMaps condition_maps(const GBuffer& gbuffer, const Camera& camera,
                             const EdgeOptions& edges) {
  ConditionMaps maps;
  maps.normal_map = encode_normals(gbuffer);
  maps.depth_map = encode_depth(gbuffer);
  maps.render = shade_headlight(gbuffer, camera);

  switch (edges.source) {
    case EdgeSource::kDepth:
      maps.edge_map = canny(maps.depth_map, edges.low, edges.high);
      break;
    case EdgeSource::kRender:
      maps.edge_map = canny(maps.render, edges.low, edges.high);
      break;
    case EdgeSource::kNormal: {
      // Per channel: differently oriented faces can share a luma value.
      maps.edge_map = Gray8(gbuffer.width, gbuffer.height, 0);
      for (int c = 0; c < 3; ++c) {
        Gray8 channel(gbuffer.width, gbuffer.height);
        for (int y = 0; y < gbuffer.height; ++y) {
          for (int x = 0; x < gbuffer.width; ++x) channel(x, y) = maps.normal_map(x, y, c);
        }
        const Gray8 found = canny(channel, edges.low, edges.high);
        for (std::size_t i = 0; i < found.data().size(); ++i) {
          maps.edge_map.data()[i] |= found.data()[i];
        }
      }
      break;
    }
  }
  const Gray8 silhouette = coverage_silhouette(gbuffer);
  for (int y = 0; y < gbuffer.height; ++y) {
    for (int x = 0; x < gbuffer.width; ++x) {
      if (!gbuffer.covered(x, y)) {
        maps.edge_map(x, y) = 0;
      } else if (silhouette(x, y) != 0) {
        maps.edge_map(x, y) = 255;
      }
    }
  }
  return maps;
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(const unsigned char* b) {
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_depth_binary(const std::filesystem::path& path, const GBuffer& gbuffer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write("TBDP", 4);
  put_u32(out, static_cast<std::uint32_t>(gbuffer.width));
  put_u32(out, static_cast<std::uint32_t>(gbuffer.height));
  put_u32(out, 0);
  for (float d : gbuffer.depth) {
    std::uint32_t bits;
    std::memcpy(&bits, &d, 4);
    put_u32(out, bits);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<float> read_depth_binary(const std::filesystem::path& path, int* width, int* height) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "TBDP", 4) != 0) {
    throw std::runtime_error("not a TBDP depth file: " + path.string());
  }
  const std::uint32_t w = get_u32(bytes.data() + 4);
  const std::uint32_t h = get_u32(bytes.data() + 8);
  const std::size_t count = static_cast<std::size_t>(w) * h;
  if (bytes.size() != 16 + 4 * count) throw std::runtime_error("truncated depth file");
  std::vector<float> depth(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t bits = get_u32(bytes.data() + 16 + 4 * i);
    std::memcpy(&depth[i], &bits, 4);
  }
  *width = static_cast<int>(w);
  *height = static_cast<int>(h);
  return depth;
}

EdgeSource parse_edge_source(std::string_view name) {
  if (name == "depth") return EdgeSource::kDepth;
  if (name == "normal") return EdgeSource::kNormal;
  if (name == "render") return EdgeSource::kRender;
  throw std::invalid_argument("unknown edge source '" + std::string(name) + "'");
}

}  // namespace texbake
