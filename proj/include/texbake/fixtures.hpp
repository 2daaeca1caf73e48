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
#include <string>

#include <Eigen/Geometry>

#include "texbake/image.hpp"
#include "texbake/mesh.hpp"

// Procedural meshes and textures with known structure, used by the test
// suites, the acceptance harness and `texbake_fixtures`.
namespace texbake::fixtures {

struct UvRect {
  double u0 = 0.0;
  double v0 = 0.0;
  double u1 = 1.0;
  double v1 = 1.0;
};

// Appends a planar quad (corners counter-clockwise seen from the front) as
// two triangles with one flat normal. UV corners follow the rect.
void add_quad(TriMesh& mesh, const std::array<Eigen::Vector3d, 4>& corners, const UvRect& uv,
              std::int32_t group);

// Axis-aligned cube of edge `size`, 12 faces, shared corner positions, one
// group; faces laid out in a 3x2 UV grid with margins.
TriMesh make_cube(double size = 1.0, const Eigen::Vector3d& center = Eigen::Vector3d::Zero(),
                  const std::string& group = "cube");

// Latitude/longitude sphere restricted to [lat_a, lat_b] (radians, either
// order). Latitude lat_a maps to v_a and lat_b to v_b inside the rect's u
// range; longitude spans u. Appends to `mesh` under `group`; positions on
// matching rings are shared with earlier bands of the same sphere via
// exact coordinates.
void add_sphere_band(TriMesh& mesh, double radius, const Eigen::Vector3d& center, int slices,
                     int stacks, double lat_a, double lat_b, double u0, double u1, double v_a,
                     double v_b, std::int32_t group);

TriMesh make_uv_sphere(double radius = 1.0, int slices = 64, int stacks = 32,
                       const Eigen::Vector3d& center = Eigen::Vector3d::Zero(),
                       const UvRect& uv = {});

// Outer sphere (radius 1) split into north/south hemisphere groups whose UV
// islands meet pole-to-pole at v = 0.5 in the left half of the atlas, and an
// inner sphere (radius 0.5) filling the right half.
TriMesh make_concentric_spheres(int slices = 64, int stacks = 32);

TriMesh make_torus(double major = 1.0, double minor = 0.35, int major_segments = 48,
                   int minor_segments = 24);

// Open-top box with inner walls and a rim: a cavity visible only from above.
TriMesh make_cup(double size = 1.0, double wall = 0.1);

// Vertical prism over a star polygon with `points` spikes. The notches
// between spikes hide their walls from views that are not roughly aligned.
TriMesh make_star_prism(int points = 6, double outer = 1.0, double inner = 0.45,
                        double height = 1.0);

// `count` unit cubes spaced along x, all in one group.
TriMesh make_cube_row(int count, double spacing = 2.0);

// Camera-facing quad in the plane z = depth_z spanning [-half, half]^2 with
// identity UVs.
TriMesh make_quad(double half = 1.0, double depth_z = 0.0);

Rgb8 make_checker(int size = 256, int cells = 8, std::array<std::uint8_t, 3> a = {230, 40, 40},
                  std::array<std::uint8_t, 3> b = {30, 60, 220});
Rgb8 make_constant(int size, std::array<std::uint8_t, 3> color);
// Smooth latitude/longitude grid pattern for sphere checks.
Rgb8 make_polar_grid(int size = 256);

}  // namespace texbake::fixtures
