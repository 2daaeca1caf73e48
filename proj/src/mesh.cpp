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

#include "texbake/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace texbake {

int TriMesh::component_count() const {
  if (face_component.empty()) return 0;
  return *std::max_element(face_component.begin(), face_component.end()) + 1;
}

namespace {

double wrap_unit(double v) {
  if (v >= 0.0 && v <= 1.0) return v;
  return v - std::floor(v);
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

// Renumbers labels to 0..C-1 in order of first appearance.
void compact_labels(std::vector<std::int32_t>& labels) {
  std::unordered_map<std::int64_t, std::int32_t> remap;
  for (auto& label : labels) {
    auto [it, inserted] = remap.try_emplace(label, static_cast<std::int32_t>(remap.size()));
    label = it->second;
  }
}

}  // namespace

double uv_double_area(const TriMesh& mesh, const Face& face) {
  const Eigen::Vector2d& a = mesh.uvs[face[0].uv];
  const Eigen::Vector2d& b = mesh.uvs[face[1].uv];
  const Eigen::Vector2d& c = mesh.uvs[face[2].uv];
  return (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
}

double face_area(const TriMesh& mesh, const Face& face) {
  const Eigen::Vector3d& a = mesh.positions[face[0].position];
  const Eigen::Vector3d& b = mesh.positions[face[1].position];
  const Eigen::Vector3d& c = mesh.positions[face[2].position];
  return 0.5 * (b - a).cross(c - a).norm();
}

ValidationReport validate(TriMesh& mesh) {
  ValidationReport report;

  const auto uv_count = static_cast<std::int32_t>(mesh.uvs.size());
  for (const Face& face : mesh.faces) {
    for (const Corner& corner : face) {
      if (corner.uv < 0 || corner.uv >= uv_count) ++report.missing_uvs;
    }
  }

  for (Eigen::Vector2d& uv : mesh.uvs) {
    if (uv.x() < 0.0 || uv.x() > 1.0 || uv.y() < 0.0 || uv.y() > 1.0) {
      ++report.out_of_range_uvs_wrapped;
      uv = {wrap_unit(uv.x()), wrap_unit(uv.y())};
    }
  }

  const BoundingBox box = bounding_box(mesh);
  const double scale = std::max((box.max - box.min).norm(), 1e-300);
  const double area_eps = 1e-14 * scale * scale;
  for (const Face& face : mesh.faces) {
    bool degenerate = face_area(mesh, face) <= area_eps;
    if (!degenerate && report.missing_uvs == 0) {
      degenerate = std::abs(uv_double_area(mesh, face)) <= 1e-14;
    }
    if (degenerate) ++report.degenerate_faces;
  }

  bool recompute = mesh.normals.empty();
  const auto normal_count = static_cast<std::int32_t>(mesh.normals.size());
  for (const Face& face : mesh.faces) {
    for (const Corner& corner : face) {
      if (corner.normal < 0 || corner.normal >= normal_count) recompute = true;
    }
  }
  for (const Eigen::Vector3d& n : mesh.normals) {
    if (!std::isfinite(n.squaredNorm()) || n.norm() < 1e-12) recompute = true;
  }

  if (recompute) {
    std::vector<Eigen::Vector3d> accumulated(mesh.positions.size(), Eigen::Vector3d::Zero());
    for (const Face& face : mesh.faces) {
      const Eigen::Vector3d& a = mesh.positions[face[0].position];
      const Eigen::Vector3d& b = mesh.positions[face[1].position];
      const Eigen::Vector3d& c = mesh.positions[face[2].position];
      // Unnormalized cross product weights by twice the area.
      const Eigen::Vector3d n = (b - a).cross(c - a);
      for (const Corner& corner : face) accumulated[corner.position] += n;
    }
    for (Eigen::Vector3d& n : accumulated) {
      const double len = n.norm();
      n = len > 0.0 ? Eigen::Vector3d(n / len) : Eigen::Vector3d::UnitZ();
    }
    mesh.normals = std::move(accumulated);
    for (Face& face : mesh.faces) {
      for (Corner& corner : face) corner.normal = corner.position;
    }
    report.normals_recomputed = true;
  } else {
    for (Eigen::Vector3d& n : mesh.normals) {
      if (std::abs(n.norm() - 1.0) > 1e-12) n.normalize();
    }
  }

  if (mesh.face_component.size() != mesh.faces.size()) {
    mesh.face_component.assign(mesh.faces.size(), 0);
  }
  return report;
}

void segment_components(TriMesh& mesh, SegmentStrategy strategy) {
  if (strategy == SegmentStrategy::kFileGroups) {
    if (mesh.face_component.size() != mesh.faces.size()) {
      mesh.face_component.assign(mesh.faces.size(), 0);
    }
    compact_labels(mesh.face_component);
    return;
  }
  DisjointSets sets(mesh.positions.size());
  for (const Face& face : mesh.faces) {
    sets.unite(face[0].position, face[1].position);
    sets.unite(face[0].position, face[2].position);
  }
  mesh.face_component.resize(mesh.faces.size());
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    mesh.face_component[f] = static_cast<std::int32_t>(sets.find(mesh.faces[f][0].position));
  }
  compact_labels(mesh.face_component);
}

std::vector<Component> components(const TriMesh& mesh) {
  std::vector<Component> out(mesh.component_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].id = static_cast<int>(i);
    out[i].uv_min = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
    out[i].uv_max = Eigen::Vector2d::Constant(-std::numeric_limits<double>::infinity());
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    Component& c = out[mesh.face_component[f]];
    c.faces.push_back(static_cast<std::int32_t>(f));
    for (const Corner& corner : mesh.faces[f]) {
      c.uv_min = c.uv_min.cwiseMin(mesh.uvs[corner.uv]);
      c.uv_max = c.uv_max.cwiseMax(mesh.uvs[corner.uv]);
    }
  }
  return out;
}

BoundingBox bounding_box(const TriMesh& mesh) {
  BoundingBox box;
  if (mesh.positions.empty()) return box;
  box.min = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  box.max = -box.min;
  for (const Face& face : mesh.faces) {
    for (const Corner& corner : face) {
      box.min = box.min.cwiseMin(mesh.positions[corner.position]);
      box.max = box.max.cwiseMax(mesh.positions[corner.position]);
    }
  }
  if (mesh.faces.empty()) {
    for (const auto& p : mesh.positions) {
      box.min = box.min.cwiseMin(p);
      box.max = box.max.cwiseMax(p);
    }
  }
  return box;
}

double bounding_radius(const TriMesh& mesh) {
  const Eigen::Vector3d center = bounding_box(mesh).center();
  double r2 = 0.0;
  for (const Face& face : mesh.faces) {
    for (const Corner& corner : face) {
      r2 = std::max(r2, (mesh.positions[corner.position] - center).squaredNorm());
    }
  }
  return std::sqrt(r2);
}

void write_obj(const std::filesystem::path& path, const TriMesh& mesh,
               const std::string& mtllib, const std::string& material) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open for writing: " + path.string());
  out.precision(9);
  if (!mtllib.empty()) out << "mtllib " << mtllib << "\n";
  for (const auto& p : mesh.positions) out << "v " << p.x() << ' ' << p.y() << ' ' << p.z() << "\n";
  for (const auto& t : mesh.uvs) out << "vt " << t.x() << ' ' << t.y() << "\n";
  for (const auto& n : mesh.normals) out << "vn " << n.x() << ' ' << n.y() << ' ' << n.z() << "\n";
  if (!material.empty()) out << "usemtl " << material << "\n";
  std::int32_t current = -1;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const std::int32_t label = f < mesh.face_component.size() ? mesh.face_component[f] : 0;
    if (label != current) {
      current = label;
      out << "g component_" << label << "\n";
    }
    out << 'f';
    for (const Corner& c : mesh.faces[f]) {
      out << ' ' << c.position + 1 << '/' << c.uv + 1 << '/' << c.normal + 1;
    }
    out << "\n";
  }
  if (!out) throw MeshError("write failed: " + path.string());
}

std::array<double, 3> ComponentHistogram::proportions() const {
  const std::size_t n = total();
  if (n == 0) return {0.0, 0.0, 0.0};
  const double scale = 100.0 / static_cast<double>(n);
  return {single * scale, few * scale, many * scale};
}

ComponentHistogram component_stats(std::span<const int> component_counts) {
  ComponentHistogram h;
  for (int count : component_counts) {
    if (count <= 0) continue;
    if (count == 1) {
      ++h.single;
    } else if (count <= 10) {
      ++h.few;
    } else {
      ++h.many;
    }
  }
  return h;
}

ComponentHistogram component_stats(std::span<const TriMesh> meshes) {
  std::vector<int> counts;
  counts.reserve(meshes.size());
  for (const TriMesh& mesh : meshes) counts.push_back(mesh.component_count());
  return component_stats(counts);
}

namespace {

MeshFormat detect_format(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".obj") return MeshFormat::kObj;
  if (ext == ".gltf" || ext == ".glb") return MeshFormat::kGltf;
  throw MeshError("unrecognized mesh extension '" + ext + "' for " + path.string());
}

}  // namespace

TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format,
                  ValidationReport* report) {
  if (!std::filesystem::exists(path)) {
    throw MeshError("mesh file not found: " + path.string());
  }
  if (format == MeshFormat::kAuto) format = detect_format(path);
  TriMesh mesh;
  if (format == MeshFormat::kObj) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open: " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    mesh = parse_obj(text, path.stem().string());
  } else {
    mesh = load_gltf(path);
  }
  if (mesh.faces.empty()) {
    throw MeshError("mesh '" + mesh.name + "' has no faces");
  }
  const auto uv_count = static_cast<std::int32_t>(mesh.uvs.size());
  for (const Face& face : mesh.faces) {
    for (const Corner& corner : face) {
      if (corner.uv < 0 || corner.uv >= uv_count) {
        throw MeshError("mesh '" + mesh.name +
                        "' has no UV coordinates on some faces; UVs are required for baking");
      }
    }
  }
  ValidationReport r = validate(mesh);
  if (report != nullptr) *report = r;
  return mesh;
}

}  // namespace texbake
