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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Geometry>

namespace texbake {

// One triangle corner: indices into the position, normal and uv arrays.
struct Corner {
  std::int32_t position = 0;
  std::int32_t normal = 0;
  std::int32_t uv = 0;

  bool operator==(const Corner&) const = default;
};

using Face = std::array<Corner, 3>;

// Indexed triangle mesh. UVs use the bottom-left origin convention (v = 1 is
// the top row of the texture image). Component ids live per face.
struct TriMesh {
  std::string name;
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector3d> normals;
  std::vector<Eigen::Vector2d> uvs;
  std::vector<Face> faces;
  std::vector<std::int32_t> face_component;
  // Names of the provisional groups the loader saw, indexed by label.
  std::vector<std::string> group_names;

  std::size_t face_count() const { return faces.size(); }
  int component_count() const;
};

struct Component {
  int id = 0;
  std::vector<std::int32_t> faces;
  Eigen::Vector2d uv_min = Eigen::Vector2d::Zero();
  Eigen::Vector2d uv_max = Eigen::Vector2d::Zero();
};

struct ValidationReport {
  std::size_t missing_uvs = 0;
  std::size_t degenerate_faces = 0;
  std::size_t out_of_range_uvs_wrapped = 0;
  bool normals_recomputed = false;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MeshFormat { kAuto, kObj, kGltf };
enum class SegmentStrategy { kFileGroups, kConnectivity };

// Loads and validates a mesh. Group/object boundaries (OBJ) or node names
// (glTF) become provisional component labels. Throws MeshError on parse
// failure, a missing UV channel, or an empty face list.
TriMesh load_mesh(const std::filesystem::path& path,
                  MeshFormat format = MeshFormat::kAuto,
                  ValidationReport* report = nullptr);

TriMesh parse_obj(std::string_view text, std::string name);
TriMesh load_gltf(const std::filesystem::path& path);

// Renormalizes normals, recomputes missing ones (area-weighted), and wraps
// UVs outside [0,1] by their fractional part. Idempotent.
ValidationReport validate(TriMesh& mesh);

// Assigns contiguous component ids, numbered in order of first face.
void segment_components(TriMesh& mesh, SegmentStrategy strategy);

std::vector<Component> components(const TriMesh& mesh);

// Twice the signed area of a UV triangle; zero for degenerate UV faces.
double uv_double_area(const TriMesh& mesh, const Face& face);
double face_area(const TriMesh& mesh, const Face& face);

struct BoundingBox {
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();
  Eigen::Vector3d center() const { return 0.5 * (min + max); }
};
BoundingBox bounding_box(const TriMesh& mesh);
// Radius of the sphere centered at the bounding-box center enclosing all
// referenced positions.
double bounding_radius(const TriMesh& mesh);

// Writes positions, normals and UVs as OBJ; optional material reference.
void write_obj(const std::filesystem::path& path, const TriMesh& mesh,
               const std::string& mtllib = {}, const std::string& material = {});

// Component-count histogram over the buckets {1, 2-10, >10}.
struct ComponentHistogram {
  std::size_t single = 0;
  std::size_t few = 0;   // 2..10
  std::size_t many = 0;  // > 10
  std::size_t total() const { return single + few + many; }
  // Percentages in bucket order; all zero for an empty histogram.
  std::array<double, 3> proportions() const;
};

ComponentHistogram component_stats(std::span<const TriMesh> meshes);
ComponentHistogram component_stats(std::span<const int> component_counts);

}  // namespace texbake
