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

#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "texbake/fixtures.hpp"
#include "texbake/raster.hpp"
#include "visibility_oracle.hpp"

namespace texbake {
namespace {

Camera looking_down_negative_z(int size = 64) {
  Camera camera;
  camera.position = Eigen::Vector3d::Zero();
  camera.target = Eigen::Vector3d(0, 0, -1);
  camera.up = Eigen::Vector3d::UnitY();
  camera.width = size;
  camera.height = size;
  camera.near = 0.1;
  camera.far = 100.0;
  return camera;
}

TriMesh quad_at(double z, double half) { return fixtures::make_quad(half, z); }

void expect_gbuffer_invariants(const GBuffer& g) {
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const std::size_t i = g.index(x, y);
      EXPECT_EQ(g.face_id[i] == kNoFace, std::isinf(g.depth[i]));
      if (g.face_id[i] == kNoFace) continue;
      const Eigen::Vector3f& b = g.bary[i];
      EXPECT_GE(b.minCoeff(), 0.0f);
      EXPECT_NEAR(b.sum(), 1.0f, 1e-4f);
      EXPECT_NEAR(g.normal[i].norm(), 1.0f, 1e-4f);
    }
  }
}

TEST(RasterTest, EmptyViewHasNoCoverage) {
  const TriMesh mesh = quad_at(5.0, 1.0);  // behind the camera
  const GBuffer g = rasterize(mesh, looking_down_negative_z());
  EXPECT_EQ(g.covered_count(), 0u);
  expect_gbuffer_invariants(g);
}

TEST(RasterTest, FullFrustumQuadHasConstantDepth) {
  const GBuffer g = rasterize(quad_at(-5.0, 20.0), looking_down_negative_z());
  EXPECT_EQ(g.covered_count(), 64u * 64u);
  for (float d : g.depth) EXPECT_NEAR(d, 5.0f, 1e-3f);
  expect_gbuffer_invariants(g);
}

TEST(RasterTest, NearerQuadWins) {
  TriMesh mesh = quad_at(-5.0, 20.0);
  const TriMesh near_quad = quad_at(-3.0, 20.0);
  const auto offset = static_cast<std::int32_t>(mesh.positions.size());
  const auto uv_offset = static_cast<std::int32_t>(mesh.uvs.size());
  const auto n_offset = static_cast<std::int32_t>(mesh.normals.size());
  mesh.positions.insert(mesh.positions.end(), near_quad.positions.begin(), near_quad.positions.end());
  mesh.uvs.insert(mesh.uvs.end(), near_quad.uvs.begin(), near_quad.uvs.end());
  mesh.normals.insert(mesh.normals.end(), near_quad.normals.begin(), near_quad.normals.end());
  for (Face f : near_quad.faces) {
    for (Corner& c : f) {
      c.position += offset;
      c.uv += uv_offset;
      c.normal += n_offset;
    }
    mesh.faces.push_back(f);
  }
  const GBuffer g = rasterize(mesh, looking_down_negative_z());
  for (std::size_t i = 0; i < g.face_id.size(); ++i) {
    EXPECT_GE(g.face_id[i], 2);
    EXPECT_NEAR(g.depth[i], 3.0f, 1e-3f);
  }
}

TEST(RasterTest, SharedEdgesLeaveNoGapsOrOverlaps) {
  // A quad split along its diagonal covers exactly the pixels of its square.
  Camera camera = looking_down_negative_z(97);
  const GBuffer g = rasterize(quad_at(-2.0, 0.5), camera);
  std::size_t expected = 0;
  for (int y = 0; y < 97; ++y) {
    for (int x = 0; x < 97; ++x) {
      const Eigen::Vector3d p = unproject(camera, x + 0.5, y + 0.5, 2.0);
      if (std::abs(p.x()) < 0.5 && std::abs(p.y()) < 0.5) ++expected;
    }
  }
  EXPECT_EQ(g.covered_count(), expected);
}

TEST(RasterTest, PerspectiveCorrectBarycentrics) {
  // A tilted quad: interpolated positions must lie on the true surface
  // under the pixel ray.
  TriMesh mesh;
  mesh.positions = {{-1, -1, -2}, {1, -1, -2}, {1, 1, -6}, {-1, 1, -6}};
  mesh.uvs = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh.normals = {Eigen::Vector3d(0, 1, 0.5).normalized()};
  mesh.faces = {{Corner{0, 0, 0}, Corner{1, 0, 1}, Corner{2, 0, 2}},
                {Corner{0, 0, 0}, Corner{2, 0, 2}, Corner{3, 0, 3}}};
  const Camera camera = looking_down_negative_z(48);
  const GBuffer g = rasterize(mesh, camera);
  ASSERT_GT(g.covered_count(), 100u);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 48; ++x) {
      const std::size_t i = g.index(x, y);
      if (g.face_id[i] == kNoFace) continue;
      const Face& face = mesh.faces[g.face_id[i]];
      Eigen::Vector3d p = Eigen::Vector3d::Zero();
      for (int k = 0; k < 3; ++k) p += g.bary[i][k] * mesh.positions[face[k].position];
      const Eigen::Vector3d on_ray = unproject(camera, x + 0.5, y + 0.5, g.depth[i]);
      EXPECT_LT((p - on_ray).norm(), 1e-4);
    }
  }
}

TEST(RasterTest, NearPlaneClippingKeepsVisiblePart) {
  TriMesh mesh;
  mesh.positions = {{-1, -1, 1}, {1, -1, -3}, {0, 1, -3}};
  mesh.uvs = {{0, 0}, {1, 0}, {0, 1}};
  mesh.normals = {{0, 0, 1}};
  mesh.faces = {{Corner{0, 0, 0}, Corner{1, 0, 1}, Corner{2, 0, 2}}};
  const Camera camera = looking_down_negative_z(64);
  const GBuffer g = rasterize(mesh, camera);
  EXPECT_GT(g.covered_count(), 0u);
  expect_gbuffer_invariants(g);
  for (std::size_t i = 0; i < g.depth.size(); ++i) {
    if (g.face_id[i] != kNoFace) { EXPECT_GE(g.depth[i], camera.near - 1e-6); }
  }
  const auto audit = testing::audit_visibility(mesh, camera, g);
  EXPECT_EQ(audit.depth_violations, 0u);
  EXPECT_EQ(audit.coverage_violations, 0u);
}

TEST(RasterTest, ExhaustiveDepthTestOnSmallMeshes) {
  const TriMesh meshes[] = {fixtures::make_cube(), fixtures::make_uv_sphere(1.0, 16, 8),
                            fixtures::make_cup(), fixtures::make_torus(1.0, 0.35, 16, 8)};
  for (const TriMesh& mesh : meshes) {
    ASSERT_LE(mesh.faces.size(), 500u);
    const OrbitSpec spec = default_orbit(mesh, 3, 2.2, 0.7, 48);
    for (const Camera& camera : orbit_cameras(spec)) {
      const GBuffer g = rasterize(mesh, camera);
      const auto audit = testing::audit_visibility(mesh, camera, g);
      EXPECT_GT(audit.covered, 0u);
      EXPECT_EQ(audit.depth_violations, 0u) << mesh.name;
      EXPECT_EQ(audit.coverage_violations, 0u) << mesh.name;
      expect_gbuffer_invariants(g);
    }
  }
}

TEST(RasterTest, Deterministic) {
  const TriMesh mesh = fixtures::make_torus();
  const Camera camera = orbit_cameras(default_orbit(mesh, 2, 1.8, 0.5, 128))[1];
  const GBuffer a = rasterize(mesh, camera);
  const GBuffer b = rasterize(mesh, camera);
  EXPECT_EQ(a.depth, b.depth);
  EXPECT_EQ(a.face_id, b.face_id);
  const ConditionMaps ma = condition_maps(a, camera);
  const ConditionMaps mb = condition_maps(b, camera);
  EXPECT_EQ(encode_png(ma.normal_map), encode_png(mb.normal_map));
  EXPECT_EQ(encode_png(ma.edge_map), encode_png(mb.edge_map));
  EXPECT_EQ(encode_png(ma.depth_map), encode_png(mb.depth_map));
}

TEST(ConditionMapsTest, NormalEncodingAndBackground) {
  const Camera camera = looking_down_negative_z(32);
  const GBuffer g = rasterize(quad_at(-3.0, 0.5), camera);
  const ConditionMaps maps = condition_maps(g, camera);
  const std::uint8_t* center = maps.normal_map.at(16, 16);
  EXPECT_NEAR(center[0], 128, 1);
  EXPECT_NEAR(center[1], 128, 1);
  EXPECT_EQ(center[2], 255);
  const std::uint8_t* corner = maps.normal_map.at(0, 0);
  EXPECT_EQ(corner[0], 128);
  EXPECT_EQ(corner[1], 128);
  EXPECT_EQ(corner[2], 128);
  EXPECT_EQ(maps.depth_map(0, 0), 0);
  EXPECT_EQ(maps.edge_map(0, 0), 0);
  EXPECT_EQ(maps.render(0, 0), 0);
  EXPECT_EQ(maps.depth_map(16, 16), 255);  // a fronto-parallel plane is all "near"
}

TEST(ConditionMapsTest, NormalsDecodeToUnitVectors) {
  const TriMesh mesh = fixtures::make_uv_sphere(1.0, 32, 16);
  const Camera camera = orbit_cameras(default_orbit(mesh, 1, 2.5, 0.5, 96))[0];
  const GBuffer g = rasterize(mesh, camera);
  const Rgb8 encoded = encode_normals(g);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (!g.covered(x, y)) continue;
      const std::uint8_t* p = encoded.at(x, y);
      const Eigen::Vector3d n(p[0] / 255.0 * 2 - 1, p[1] / 255.0 * 2 - 1, p[2] / 255.0 * 2 - 1);
      for (int c = 0; c < 3; ++c) EXPECT_NEAR(n[c], g.normal[g.index(x, y)][c], 1.0 / 128);
      EXPECT_NEAR(n.norm(), 1.0, 2.0 / 128);
    }
  }
}

TEST(ConditionMapsTest, DepthMapNearIsWhite) {
  TriMesh mesh;
  mesh.positions = {{-1, -1, -2}, {1, -1, -2}, {1, 1, -6}, {-1, 1, -6}};
  mesh.uvs = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  mesh.normals = {Eigen::Vector3d(0, 1, 0.5).normalized()};
  mesh.faces = {{Corner{0, 0, 0}, Corner{1, 0, 1}, Corner{2, 0, 2}},
                {Corner{0, 0, 0}, Corner{2, 0, 2}, Corner{3, 0, 3}}};
  const Camera camera = looking_down_negative_z(64);
  const GBuffer g = rasterize(mesh, camera);
  const Gray8 depth = encode_depth(g);
  int lo = 255, hi = 0;
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (!g.covered(x, y)) continue;
      lo = std::min<int>(lo, depth(x, y));
      hi = std::max<int>(hi, depth(x, y));
    }
  }
  EXPECT_EQ(hi, 255);
  EXPECT_LE(lo, 1);
  // The near edge (bottom of the image) is brighter than the far edge.
  EXPECT_GT(depth(32, 60), depth(32, 20));
}

TEST(ConditionMapsTest, FlatPlaneHasNoInteriorEdges) {
  const Camera camera = looking_down_negative_z(64);
  const GBuffer g = rasterize(quad_at(-3.0, 20.0), camera);
  for (EdgeSource source : {EdgeSource::kDepth, EdgeSource::kNormal, EdgeSource::kRender}) {
    const ConditionMaps maps = condition_maps(g, camera, {source, 0.05, 0.15});
    for (std::uint8_t v : maps.edge_map.data()) EXPECT_EQ(v, 0);
  }
}

// Pixels where the depth buffer jumps, including coverage boundaries.
Gray8 discontinuity_oracle(const GBuffer& g, double relative_jump) {
  Gray8 out(g.width, g.height, 0);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (!g.covered(x, y)) continue;
      const double d = g.depth[g.index(x, y)];
      const int dx[] = {1, -1, 0, 0};
      const int dy[] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx[k], ny = y + dy[k];
        if (nx < 0 || ny < 0 || nx >= g.width || ny >= g.height || !g.covered(nx, ny) ||
            std::abs(g.depth[g.index(nx, ny)] - d) > relative_jump * d) {
          out(x, y) = 255;
        }
      }
    }
  }
  return out;
}

bool near_edge(const Gray8& edges, int x, int y, int radius) {
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (edges.contains(x + dx, y + dy) && edges(x + dx, y + dy)) return true;
    }
  }
  return false;
}

TEST(ConditionMapsTest, CubeCornerEdgesMatchDiscontinuityOracle) {
  const TriMesh cube = fixtures::make_cube();
  Camera camera;
  camera.position = Eigen::Vector3d(2.2, 1.9, 1.6);
  camera.target = Eigen::Vector3d::Zero();
  camera.width = camera.height = 128;
  camera.near = 0.5;
  camera.far = 10;
  const GBuffer g = rasterize(cube, camera);
  const ConditionMaps maps = condition_maps(g, camera);
  const Gray8 oracle = discontinuity_oracle(g, 0.05);
  std::size_t oracle_count = 0;
  for (int y = 0; y < 128; ++y) {
    for (int x = 0; x < 128; ++x) {
      if (oracle(x, y)) {
        ++oracle_count;
        EXPECT_TRUE(near_edge(maps.edge_map, x, y, 1)) << x << "," << y;
      }
      if (maps.edge_map(x, y)) { EXPECT_TRUE(g.covered(x, y)); }
    }
  }
  EXPECT_GT(oracle_count, 100u);

  // The three creases between visible faces show up in the normal-based
  // edge map: every pixel next to a face-normal change is near an edge.
  const ConditionMaps normal_edges = condition_maps(g, camera, {EdgeSource::kNormal, 0.05, 0.15});
  std::size_t crease = 0;
  for (int y = 1; y < 127; ++y) {
    for (int x = 1; x < 127; ++x) {
      if (!g.covered(x, y) || !g.covered(x + 1, y) || !g.covered(x, y + 1)) continue;
      const auto& n = g.normal[g.index(x, y)];
      if (n.dot(g.normal[g.index(x + 1, y)]) < 0.5f || n.dot(g.normal[g.index(x, y + 1)]) < 0.5f) {
        ++crease;
        EXPECT_TRUE(near_edge(normal_edges.edge_map, x, y, 2)) << x << "," << y;
      }
    }
  }
  EXPECT_GT(crease, 50u);
}

TEST(DepthBinaryTest, HeaderAndRoundTrip) {
  testing::TempDir dir;
  const Camera camera = looking_down_negative_z(8);
  TriMesh quad = quad_at(-2.0, 0.3);
  const GBuffer g = rasterize(quad, camera);
  write_depth_binary(dir / "d.bin", g);
  const auto bytes = read_file(dir / "d.bin");
  ASSERT_EQ(bytes.size(), 16u + 8 * 8 * 4);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "TBDP");
  EXPECT_EQ(bytes[4], 8);
  EXPECT_EQ(bytes[8], 8);
  int w = 0, h = 0;
  const auto depth = read_depth_binary(dir / "d.bin", &w, &h);
  EXPECT_EQ(w, 8);
  EXPECT_EQ(h, 8);
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (std::isinf(g.depth[i])) {
      EXPECT_TRUE(std::isinf(depth[i]));
    } else {
      EXPECT_EQ(depth[i], g.depth[i]);
    }
  }
  write_file(dir / "bad.bin", std::vector<std::uint8_t>{'N', 'O', 'P', 'E'});
  EXPECT_THROW(read_depth_binary(dir / "bad.bin", &w, &h), std::runtime_error);
}

TEST(EdgeSourceTest, Parse) {
  EXPECT_EQ(parse_edge_source("depth"), EdgeSource::kDepth);
  EXPECT_EQ(parse_edge_source("normal"), EdgeSource::kNormal);
  EXPECT_EQ(parse_edge_source("render"), EdgeSource::kRender);
  EXPECT_THROW(parse_edge_source("sobel"), std::invalid_argument);
}

}  // namespace
}  // namespace texbake
