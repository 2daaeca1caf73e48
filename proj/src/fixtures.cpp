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

#include "texbake/fixtures.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace texbake::fixtures {

namespace {

std::int32_t intern(TriMesh& mesh, const Eigen::Vector3d& p) {
  for (std::size_t i = 0; i < mesh.positions.size(); ++i) {
    if (mesh.positions[i] == p) return static_cast<std::int32_t>(i);
  }
  mesh.positions.push_back(p);
  return static_cast<std::int32_t>(mesh.positions.size() - 1);
}

// Exact-coordinate position cache for large meshes.
class PositionPool {
 public:
  explicit PositionPool(TriMesh& mesh) : mesh_(mesh) {
    for (std::size_t i = 0; i < mesh.positions.size(); ++i) {
      const auto& p = mesh.positions[i];
      ids_.emplace(std::array<double, 3>{p.x(), p.y(), p.z()}, static_cast<std::int32_t>(i));
    }
  }
  std::int32_t operator()(const Eigen::Vector3d& p) {
    auto [it, inserted] = ids_.try_emplace(std::array<double, 3>{p.x(), p.y(), p.z()},
                                           static_cast<std::int32_t>(mesh_.positions.size()));
    if (inserted) mesh_.positions.push_back(p);
    return it->second;
  }

 private:
  TriMesh& mesh_;
  std::map<std::array<double, 3>, std::int32_t> ids_;
};

std::int32_t ensure_group(TriMesh& mesh, const std::string& name) {
  for (std::size_t i = 0; i < mesh.group_names.size(); ++i) {
    if (mesh.group_names[i] == name) return static_cast<std::int32_t>(i);
  }
  mesh.group_names.push_back(name);
  return static_cast<std::int32_t>(mesh.group_names.size() - 1);
}

std::int32_t add_uv(TriMesh& mesh, double u, double v) {
  mesh.uvs.emplace_back(u, v);
  return static_cast<std::int32_t>(mesh.uvs.size() - 1);
}

std::int32_t add_normal(TriMesh& mesh, const Eigen::Vector3d& n) {
  mesh.normals.push_back(n.normalized());
  return static_cast<std::int32_t>(mesh.normals.size() - 1);
}

void add_face(TriMesh& mesh, const Face& face, std::int32_t group) {
  mesh.faces.push_back(face);
  mesh.face_component.push_back(group);
}

}  // namespace

void add_quad(TriMesh& mesh, const std::array<Eigen::Vector3d, 4>& corners, const UvRect& uv,
              std::int32_t group) {
  const Eigen::Vector3d n = (corners[1] - corners[0]).cross(corners[2] - corners[0]);
  const std::int32_t normal = add_normal(mesh, n);
  const std::array<std::array<double, 2>, 4> uvs = {
      {{uv.u0, uv.v0}, {uv.u1, uv.v0}, {uv.u1, uv.v1}, {uv.u0, uv.v1}}};
  std::array<Corner, 4> c;
  for (int k = 0; k < 4; ++k) {
    c[k] = {intern(mesh, corners[k]), normal, add_uv(mesh, uvs[k][0], uvs[k][1])};
  }
  add_face(mesh, {c[0], c[1], c[2]}, group);
  add_face(mesh, {c[0], c[2], c[3]}, group);
}

TriMesh make_cube(double size, const Eigen::Vector3d& center, const std::string& group) {
  TriMesh mesh;
  mesh.name = "cube";
  const std::int32_t g = ensure_group(mesh, group);
  const double h = 0.5 * size;
  // (normal, tangent) per face; bitangent = normal x tangent.
  const std::array<std::array<Eigen::Vector3d, 2>, 6> frames = {{
      {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()},
      {-Eigen::Vector3d::UnitX(), -Eigen::Vector3d::UnitY()},
      {Eigen::Vector3d::UnitY(), -Eigen::Vector3d::UnitX()},
      {-Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitX()},
      {Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitX()},
      {-Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitX()},
  }};
  constexpr double kMargin = 0.02;
  for (int f = 0; f < 6; ++f) {
    const Eigen::Vector3d& n = frames[f][0];
    const Eigen::Vector3d& t = frames[f][1];
    const Eigen::Vector3d b = n.cross(t);
    const Eigen::Vector3d c = center + h * n;
    const std::array<Eigen::Vector3d, 4> corners = {c - h * t - h * b, c + h * t - h * b,
                                                    c + h * t + h * b, c - h * t + h * b};
    const int col = f % 3;
    const int row = f / 3;
    const UvRect rect{col / 3.0 + kMargin, row / 2.0 + kMargin, (col + 1) / 3.0 - kMargin,
                      (row + 1) / 2.0 - kMargin};
    add_quad(mesh, corners, rect, g);
  }
  return mesh;
}

void add_sphere_band(TriMesh& mesh, double radius, const Eigen::Vector3d& center, int slices,
                     int stacks, double lat_a, double lat_b, double u0, double u1, double v_a,
                     double v_b, std::int32_t group) {
  PositionPool pool(mesh);
  const double half_pi = 0.5 * std::numbers::pi;
  auto point = [&](double lat, double lon) -> Eigen::Vector3d {
    if (std::abs(lat) == half_pi) return center + Eigen::Vector3d(0, 0, lat > 0 ? radius : -radius);
    return center + radius * Eigen::Vector3d(std::cos(lat) * std::cos(lon),
                                             std::cos(lat) * std::sin(lon), std::sin(lat));
  };
  // Vertex rows at lat_a + (lat_b - lat_a) * i / stacks.
  std::vector<std::vector<Corner>> grid(stacks + 1, std::vector<Corner>(slices + 1));
  for (int i = 0; i <= stacks; ++i) {
    const double s = static_cast<double>(i) / stacks;
    const double lat = i == stacks ? lat_b : lat_a + (lat_b - lat_a) * s;
    const double v = v_a + (v_b - v_a) * s;
    for (int j = 0; j <= slices; ++j) {
      const double lon = 2.0 * std::numbers::pi * (j == slices ? 0 : j) / slices;
      const double u = u0 + (u1 - u0) * j / slices;
      const Eigen::Vector3d p = point(lat, lon);
      const std::int32_t pos = pool(p);
      grid[i][j] = {pos, -1, add_uv(mesh, u, v)};
    }
  }
  // Smooth normals from the sphere center.
  for (auto& row : grid) {
    for (Corner& c : row) {
      c.normal = add_normal(mesh, mesh.positions[c.position] - center);
    }
  }
  const bool ascending = lat_b > lat_a;
  for (int i = 0; i < stacks; ++i) {
    for (int j = 0; j < slices; ++j) {
      Corner a = grid[i][j], b = grid[i][j + 1], c = grid[i + 1][j + 1], d = grid[i + 1][j];
      // Outward winding: counter-clockwise seen from outside when latitude
      // increases along i.
      if (!ascending) {
        std::swap(a, d);
        std::swap(b, c);
      }
      // At a pole one edge of the quad collapses; keep the other triangle.
      if (a.position != b.position) add_face(mesh, {a, b, c}, group);
      if (c.position != d.position) add_face(mesh, {a, c, d}, group);
    }
  }
}

TriMesh make_uv_sphere(double radius, int slices, int stacks, const Eigen::Vector3d& center,
                       const UvRect& uv) {
  TriMesh mesh;
  mesh.name = "uv_sphere";
  const std::int32_t g = ensure_group(mesh, "sphere");
  const double half_pi = 0.5 * std::numbers::pi;
  add_sphere_band(mesh, radius, center, slices, stacks, -half_pi, half_pi, uv.u0, uv.u1, uv.v0,
                  uv.v1, g);
  return mesh;
}

TriMesh make_concentric_spheres(int slices, int stacks) {
  TriMesh mesh;
  mesh.name = "concentric_spheres";
  const double half_pi = 0.5 * std::numbers::pi;
  const std::int32_t north = ensure_group(mesh, "outer_north");
  const std::int32_t south = ensure_group(mesh, "outer_south");
  const std::int32_t inner = ensure_group(mesh, "inner");
  const Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  // Equator at the outer edge of each island, poles meeting at v = 0.5.
  add_sphere_band(mesh, 1.0, origin, slices, stacks / 2, 0.0, half_pi, 0.0, 0.5, 1.0, 0.5, north);
  add_sphere_band(mesh, 1.0, origin, slices, stacks / 2, 0.0, -half_pi, 0.0, 0.5, 0.0, 0.5, south);
  add_sphere_band(mesh, 0.5, origin, slices, stacks, -half_pi, half_pi, 0.5, 1.0, 0.0, 1.0, inner);
  return mesh;
}

TriMesh make_torus(double major, double minor, int major_segments, int minor_segments) {
  TriMesh mesh;
  mesh.name = "torus";
  const std::int32_t g = ensure_group(mesh, "torus");
  PositionPool pool(mesh);
  auto point = [&](int i, int j) {
    const double a = 2.0 * std::numbers::pi * (i % major_segments) / major_segments;
    const double b = 2.0 * std::numbers::pi * (j % minor_segments) / minor_segments;
    const double ring = major + minor * std::cos(b);
    return Eigen::Vector3d(ring * std::cos(a), ring * std::sin(a), minor * std::sin(b));
  };
  auto normal = [&](int i, int j) {
    const double a = 2.0 * std::numbers::pi * (i % major_segments) / major_segments;
    const double b = 2.0 * std::numbers::pi * (j % minor_segments) / minor_segments;
    return Eigen::Vector3d(std::cos(b) * std::cos(a), std::cos(b) * std::sin(a), std::sin(b));
  };
  auto corner = [&](int i, int j) {
    return Corner{pool(point(i, j)), add_normal(mesh, normal(i, j)),
                  add_uv(mesh, static_cast<double>(i) / major_segments,
                         static_cast<double>(j) / minor_segments)};
  };
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      const Corner a = corner(i, j), b = corner(i + 1, j), c = corner(i + 1, j + 1),
                   d = corner(i, j + 1);
      add_face(mesh, {a, b, c}, g);
      add_face(mesh, {a, c, d}, g);
    }
  }
  return mesh;
}

TriMesh make_cup(double size, double wall) {
  TriMesh mesh;
  mesh.name = "cup";
  const std::int32_t g = ensure_group(mesh, "cup");
  const double o = 0.5 * size;
  const double i = o - wall;
  const double bottom = -o;
  const double inner_bottom = -o + wall;
  const double top = o;
  int cell = 0;
  auto next_rect = [&cell]() {
    constexpr double kMargin = 0.01;
    const int col = cell % 4;
    const int row = cell / 4;
    ++cell;
    return UvRect{col / 4.0 + kMargin, row / 4.0 + kMargin, (col + 1) / 4.0 - kMargin,
                  (row + 1) / 4.0 - kMargin};
  };
  using V = Eigen::Vector3d;
  // Outer walls, counter-clockwise from outside.
  add_quad(mesh, {V(o, -o, bottom), V(o, o, bottom), V(o, o, top), V(o, -o, top)}, next_rect(), g);
  add_quad(mesh, {V(o, o, bottom), V(-o, o, bottom), V(-o, o, top), V(o, o, top)}, next_rect(), g);
  add_quad(mesh, {V(-o, o, bottom), V(-o, -o, bottom), V(-o, -o, top), V(-o, o, top)}, next_rect(), g);
  add_quad(mesh, {V(-o, -o, bottom), V(o, -o, bottom), V(o, -o, top), V(-o, -o, top)}, next_rect(), g);
  add_quad(mesh, {V(-o, -o, bottom), V(-o, o, bottom), V(o, o, bottom), V(o, -o, bottom)}, next_rect(), g);
  // Inner walls face the cavity.
  add_quad(mesh, {V(i, i, inner_bottom), V(i, -i, inner_bottom), V(i, -i, top), V(i, i, top)}, next_rect(), g);
  add_quad(mesh, {V(-i, i, inner_bottom), V(i, i, inner_bottom), V(i, i, top), V(-i, i, top)}, next_rect(), g);
  add_quad(mesh, {V(-i, -i, inner_bottom), V(-i, i, inner_bottom), V(-i, i, top), V(-i, -i, top)}, next_rect(), g);
  add_quad(mesh, {V(i, -i, inner_bottom), V(-i, -i, inner_bottom), V(-i, -i, top), V(i, -i, top)}, next_rect(), g);
  add_quad(mesh, {V(-i, -i, inner_bottom), V(i, -i, inner_bottom), V(i, i, inner_bottom), V(-i, i, inner_bottom)}, next_rect(), g);
  // Rim.
  add_quad(mesh, {V(i, -i, top), V(o, -o, top), V(o, o, top), V(i, i, top)}, next_rect(), g);
  add_quad(mesh, {V(i, i, top), V(o, o, top), V(-o, o, top), V(-i, i, top)}, next_rect(), g);
  add_quad(mesh, {V(-i, i, top), V(-o, o, top), V(-o, -o, top), V(-i, -i, top)}, next_rect(), g);
  add_quad(mesh, {V(-i, -i, top), V(-o, -o, top), V(o, -o, top), V(i, -i, top)}, next_rect(), g);
  return mesh;
}

TriMesh make_star_prism(int points, double outer, double inner, double height) {
  TriMesh mesh;
  mesh.name = "star_prism";
  const std::int32_t g = ensure_group(mesh, "star");
  const int n = 2 * points;
  std::vector<Eigen::Vector2d> ring(n);
  for (int k = 0; k < n; ++k) {
    const double angle = std::numbers::pi * k / points;
    const double r = k % 2 == 0 ? outer : inner;
    ring[k] = r * Eigen::Vector2d(std::cos(angle), std::sin(angle));
  }
  const double lo = -0.5 * height;
  const double hi = 0.5 * height;
  // Walls take the first n cells of a square grid, the caps the next two.
  const int grid = static_cast<int>(std::ceil(std::sqrt(n + 2.0)));
  constexpr double kMargin = 0.01;
  auto cell_rect = [&](int cell) {
    const int col = cell % grid;
    const int row = cell / grid;
    return UvRect{static_cast<double>(col) / grid + kMargin, static_cast<double>(row) / grid + kMargin,
                  static_cast<double>(col + 1) / grid - kMargin,
                  static_cast<double>(row + 1) / grid - kMargin};
  };
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector2d& a = ring[k];
    const Eigen::Vector2d& b = ring[(k + 1) % n];
    add_quad(mesh,
             {Eigen::Vector3d(a.x(), a.y(), lo), Eigen::Vector3d(b.x(), b.y(), lo),
              Eigen::Vector3d(b.x(), b.y(), hi), Eigen::Vector3d(a.x(), a.y(), hi)},
             cell_rect(k), g);
  }
  for (int cap = 0; cap < 2; ++cap) {
    const UvRect rect = cell_rect(n + cap);
    const double z = cap == 0 ? hi : lo;
    const std::int32_t normal = add_normal(mesh, Eigen::Vector3d(0, 0, cap == 0 ? 1.0 : -1.0));
    auto corner = [&](const Eigen::Vector2d& p) {
      const double u = rect.u0 + (rect.u1 - rect.u0) * (0.5 + 0.5 * p.x() / outer);
      const double v = rect.v0 + (rect.v1 - rect.v0) * (0.5 + 0.5 * p.y() / outer);
      return Corner{intern(mesh, Eigen::Vector3d(p.x(), p.y(), z)), normal, add_uv(mesh, u, v)};
    };
    const Corner center = corner(Eigen::Vector2d::Zero());
    for (int k = 0; k < n; ++k) {
      const Corner a = corner(ring[k]);
      const Corner b = corner(ring[(k + 1) % n]);
      if (cap == 0) {
        add_face(mesh, {center, a, b}, g);
      } else {
        add_face(mesh, {center, b, a}, g);
      }
    }
  }
  return mesh;
}

TriMesh make_cube_row(int count, double spacing) {
  TriMesh mesh;
  mesh.name = "cube_row";
  const std::int32_t g = ensure_group(mesh, "cubes");
  for (int k = 0; k < count; ++k) {
    TriMesh cube = make_cube(1.0, Eigen::Vector3d(k * spacing, 0, 0));
    const auto p0 = static_cast<std::int32_t>(mesh.positions.size());
    const auto n0 = static_cast<std::int32_t>(mesh.normals.size());
    const auto t0 = static_cast<std::int32_t>(mesh.uvs.size());
    mesh.positions.insert(mesh.positions.end(), cube.positions.begin(), cube.positions.end());
    mesh.normals.insert(mesh.normals.end(), cube.normals.begin(), cube.normals.end());
    // Each cube gets its own horizontal strip of the atlas.
    for (const auto& uv : cube.uvs) {
      mesh.uvs.emplace_back(uv.x(), (uv.y() + k) / count);
    }
    for (Face face : cube.faces) {
      for (Corner& c : face) {
        c.position += p0;
        c.normal += n0;
        c.uv += t0;
      }
      add_face(mesh, face, g);
    }
  }
  return mesh;
}

TriMesh make_quad(double half, double depth_z) {
  TriMesh mesh;
  mesh.name = "quad";
  const std::int32_t g = ensure_group(mesh, "quad");
  using V = Eigen::Vector3d;
  add_quad(mesh,
           {V(-half, -half, depth_z), V(half, -half, depth_z), V(half, half, depth_z),
            V(-half, half, depth_z)},
           UvRect{0.0, 0.0, 1.0, 1.0}, g);
  return mesh;
}

Rgb8 make_checker(int size, int cells, std::array<std::uint8_t, 3> a, std::array<std::uint8_t, 3> b) {
  Rgb8 image(size, size);
  const int cell = std::max(1, size / cells);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const auto& c = ((x / cell + y / cell) % 2 == 0) ? a : b;
      std::uint8_t* p = image.at(x, y);
      p[0] = c[0];
      p[1] = c[1];
      p[2] = c[2];
    }
  }
  return image;
}

Rgb8 make_constant(int size, std::array<std::uint8_t, 3> color) {
  Rgb8 image(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      std::uint8_t* p = image.at(x, y);
      p[0] = color[0];
      p[1] = color[1];
      p[2] = color[2];
    }
  }
  return image;
}

Rgb8 make_polar_grid(int size) {
  Rgb8 image(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double u = (x + 0.5) / size;
      const double v = 1.0 - (y + 0.5) / size;
      const double s = 0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * 6.0 * u);
      const double t = 0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * 4.0 * v);
      std::uint8_t* p = image.at(x, y);
      p[0] = to_byte(0.15 + 0.7 * s);
      p[1] = to_byte(0.15 + 0.7 * t);
      p[2] = to_byte(0.5);
    }
  }
  return image;
}

}  // namespace texbake::fixtures
