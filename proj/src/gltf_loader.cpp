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

#include <cstring>
#include <fstream>
#include <map>

#include <Eigen/Geometry>
#include <json.hpp>

#include "texbake/base64.hpp"
#include "texbake/image.hpp"
#include "texbake/mesh.hpp"

namespace texbake {

namespace {

using nlohmann::json;

constexpr std::uint32_t kGlbMagic = 0x46546C67;
constexpr std::uint32_t kChunkJson = 0x4E4F534A;
constexpr std::uint32_t kChunkBin = 0x004E4942;

constexpr int kByte = 5120;
constexpr int kUnsignedByte = 5121;
constexpr int kShort = 5122;
constexpr int kUnsignedShort = 5123;
constexpr int kUnsignedInt = 5125;
constexpr int kFloat = 5126;

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

int component_size(int type) {
  switch (type) {
    case kByte:
    case kUnsignedByte:
      return 1;
    case kShort:
    case kUnsignedShort:
      return 2;
    case kUnsignedInt:
    case kFloat:
      return 4;
    default:
      throw MeshError("gltf: unsupported componentType " + std::to_string(type));
  }
}

int type_width(const std::string& type) {
  if (type == "SCALAR") return 1;
  if (type == "VEC2") return 2;
  if (type == "VEC3") return 3;
  if (type == "VEC4") return 4;
  throw MeshError("gltf: unsupported accessor type " + type);
}

class GltfDocument {
 public:
  GltfDocument(const std::filesystem::path& path) : base_dir_(path.parent_path()) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    std::vector<std::uint8_t> glb_bin;
    if (bytes.size() >= 12 && read_u32(bytes.data()) == kGlbMagic) {
      std::size_t offset = 12;
      std::string json_text;
      while (offset + 8 <= bytes.size()) {
        const std::uint32_t length = read_u32(bytes.data() + offset);
        const std::uint32_t type = read_u32(bytes.data() + offset + 4);
        offset += 8;
        if (offset + length > bytes.size()) throw MeshError("gltf: truncated GLB chunk");
        if (type == kChunkJson) {
          json_text.assign(reinterpret_cast<const char*>(bytes.data() + offset), length);
        } else if (type == kChunkBin) {
          glb_bin.assign(bytes.begin() + offset, bytes.begin() + offset + length);
        }
        offset += length;
      }
      doc_ = parse(json_text);
    } else {
      doc_ = parse(std::string(bytes.begin(), bytes.end()));
    }
    for (const json& buffer : doc_.value("buffers", json::array())) {
      if (!buffer.contains("uri")) {
        buffers_.push_back(glb_bin);
        continue;
      }
      const std::string uri = buffer.at("uri").get<std::string>();
      if (uri.rfind("data:", 0) == 0) {
        const auto comma = uri.find(',');
        if (comma == std::string::npos || uri.find(";base64") > comma) {
          throw MeshError("gltf: only base64 data URIs are supported");
        }
        buffers_.push_back(base64_decode(std::string_view(uri).substr(comma + 1)));
      } else {
        buffers_.push_back(read_file(base_dir_ / uri));
      }
    }
  }

  const json& root() const { return doc_; }

  // Reads an accessor as doubles, `width` values per element.
  std::vector<double> read_accessor(int index, int* width) const {
    const json& accessor = doc_.at("accessors").at(index);
    const int type = accessor.at("componentType").get<int>();
    const int count = accessor.at("count").get<int>();
    const int w = type_width(accessor.at("type").get<std::string>());
    const bool normalized = accessor.value("normalized", false);
    *width = w;
    std::vector<double> out(static_cast<std::size_t>(count) * w, 0.0);
    if (!accessor.contains("bufferView")) return out;
    const json& view = doc_.at("bufferViews").at(accessor.at("bufferView").get<int>());
    const auto& buffer = buffers_.at(view.at("buffer").get<int>());
    const std::size_t csize = component_size(type);
    const std::size_t stride = view.value("byteStride", 0) != 0
                                   ? view.at("byteStride").get<std::size_t>()
                                   : csize * w;
    const std::size_t base =
        view.value("byteOffset", std::size_t{0}) + accessor.value("byteOffset", std::size_t{0});
    if (count > 0 && base + stride * (count - 1) + csize * w > buffer.size()) {
      throw MeshError("gltf: accessor " + std::to_string(index) + " exceeds its buffer");
    }
    for (int i = 0; i < count; ++i) {
      const std::uint8_t* element = buffer.data() + base + stride * i;
      for (int c = 0; c < w; ++c) {
        const std::uint8_t* p = element + csize * c;
        double value = 0.0;
        switch (type) {
          case kFloat: {
            float f;
            std::memcpy(&f, p, 4);
            value = f;
            break;
          }
          case kUnsignedByte:
            value = normalized ? p[0] / 255.0 : p[0];
            break;
          case kByte:
            value = normalized ? std::max(static_cast<std::int8_t>(p[0]) / 127.0, -1.0)
                               : static_cast<std::int8_t>(p[0]);
            break;
          case kUnsignedShort: {
            std::uint16_t s;
            std::memcpy(&s, p, 2);
            value = normalized ? s / 65535.0 : s;
            break;
          }
          case kShort: {
            std::int16_t s;
            std::memcpy(&s, p, 2);
            value = normalized ? std::max(s / 32767.0, -1.0) : s;
            break;
          }
          case kUnsignedInt: {
            std::uint32_t u;
            std::memcpy(&u, p, 4);
            value = u;
            break;
          }
        }
        out[static_cast<std::size_t>(i) * w + c] = value;
      }
    }
    return out;
  }

 private:
  static json parse(const std::string& text) {
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw MeshError(std::string("gltf: invalid JSON: ") + e.what());
    }
  }

  std::filesystem::path base_dir_;
  json doc_;
  std::vector<std::vector<std::uint8_t>> buffers_;
};

Eigen::Matrix4d local_transform(const json& node) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  if (node.contains("matrix")) {
    const auto values = node.at("matrix").get<std::vector<double>>();
    if (values.size() != 16) throw MeshError("gltf: node matrix must have 16 values");
    for (int i = 0; i < 16; ++i) m(i % 4, i / 4) = values[i];  // column-major
    return m;
  }
  Eigen::Affine3d t = Eigen::Affine3d::Identity();
  if (node.contains("translation")) {
    const auto v = node.at("translation").get<std::vector<double>>();
    t.translate(Eigen::Vector3d(v.at(0), v.at(1), v.at(2)));
  }
  if (node.contains("rotation")) {
    const auto q = node.at("rotation").get<std::vector<double>>();
    t.rotate(Eigen::Quaterniond(q.at(3), q.at(0), q.at(1), q.at(2)).normalized());
  }
  if (node.contains("scale")) {
    const auto s = node.at("scale").get<std::vector<double>>();
    t.scale(Eigen::Vector3d(s.at(0), s.at(1), s.at(2)));
  }
  return t.matrix();
}

struct PositionKey {
  std::array<double, 3> xyz;
  bool operator<(const PositionKey& o) const { return xyz < o.xyz; }
};

class GltfMeshBuilder {
 public:
  GltfMeshBuilder(const GltfDocument& doc, TriMesh& mesh) : doc_(doc), mesh_(mesh) {}

  void visit(int node_index, const Eigen::Matrix4d& parent, int depth) {
    if (depth > 64) throw MeshError("gltf: node hierarchy too deep or cyclic");
    const json& node = doc_.root().at("nodes").at(node_index);
    const Eigen::Matrix4d world = parent * local_transform(node);
    if (node.contains("mesh")) {
      const int mesh_index = node.at("mesh").get<int>();
      const json& gltf_mesh = doc_.root().at("meshes").at(mesh_index);
      std::string group = node.value("name", std::string());
      if (group.empty()) group = gltf_mesh.value("name", std::string());
      if (group.empty()) group = "node_" + std::to_string(node_index);
      const auto label = static_cast<std::int32_t>(mesh_.group_names.size());
      mesh_.group_names.push_back(group);
      for (const json& primitive : gltf_mesh.at("primitives")) {
        add_primitive(primitive, world, label, group);
      }
    }
    for (const json& child : node.value("children", json::array())) {
      visit(child.get<int>(), world, depth + 1);
    }
  }

 private:
  void add_primitive(const json& primitive, const Eigen::Matrix4d& world, std::int32_t label,
                     const std::string& group) {
    if (primitive.value("mode", 4) != 4) return;  // triangles only
    const json& attributes = primitive.at("attributes");
    if (!attributes.contains("POSITION")) {
      throw MeshError("gltf: primitive of '" + group + "' lacks POSITION");
    }
    int width = 0;
    const std::vector<double> positions =
        doc_.read_accessor(attributes.at("POSITION").get<int>(), &width);
    if (width != 3) throw MeshError("gltf: POSITION must be VEC3");
    const std::size_t vertex_count = positions.size() / 3;

    std::vector<double> normals;
    if (attributes.contains("NORMAL")) {
      normals = doc_.read_accessor(attributes.at("NORMAL").get<int>(), &width);
      if (width != 3 || normals.size() != positions.size()) {
        throw MeshError("gltf: NORMAL must be VEC3 matching POSITION");
      }
    }
    std::vector<double> uvs;
    if (attributes.contains("TEXCOORD_0")) {
      uvs = doc_.read_accessor(attributes.at("TEXCOORD_0").get<int>(), &width);
      if (width != 2 || uvs.size() != vertex_count * 2) {
        throw MeshError("gltf: TEXCOORD_0 must be VEC2 matching POSITION");
      }
    }

    std::vector<std::uint32_t> indices;
    if (primitive.contains("indices")) {
      const std::vector<double> raw = doc_.read_accessor(primitive.at("indices").get<int>(), &width);
      indices.reserve(raw.size());
      for (double v : raw) indices.push_back(static_cast<std::uint32_t>(v));
    } else {
      indices.resize(vertex_count);
      for (std::size_t i = 0; i < vertex_count; ++i) indices[i] = static_cast<std::uint32_t>(i);
    }

    const Eigen::Matrix3d linear = world.topLeftCorner<3, 3>();
    const Eigen::Matrix3d normal_matrix = linear.inverse().transpose();
    std::vector<Corner> corners(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
      const Eigen::Vector3d local(positions[3 * v], positions[3 * v + 1], positions[3 * v + 2]);
      const Eigen::Vector3d p = linear * local + world.block<3, 1>(0, 3);
      corners[v].position = intern_position(p);
      if (!normals.empty()) {
        const Eigen::Vector3d n =
            normal_matrix * Eigen::Vector3d(normals[3 * v], normals[3 * v + 1], normals[3 * v + 2]);
        corners[v].normal = static_cast<std::int32_t>(mesh_.normals.size());
        mesh_.normals.push_back(n);
      } else {
        corners[v].normal = -1;
      }
      if (!uvs.empty()) {
        corners[v].uv = static_cast<std::int32_t>(mesh_.uvs.size());
        // glTF puts the UV origin at the top-left; flip to bottom-left.
        mesh_.uvs.emplace_back(uvs[2 * v], 1.0 - uvs[2 * v + 1]);
      } else {
        corners[v].uv = -1;
      }
    }
    for (std::size_t i = 0; i + 2 < indices.size(); i += 3) {
      Face face;
      for (int k = 0; k < 3; ++k) {
        if (indices[i + k] >= vertex_count) {
          throw MeshError("gltf: index out of range in '" + group + "'");
        }
        face[k] = corners[indices[i + k]];
      }
      mesh_.faces.push_back(face);
      mesh_.face_component.push_back(label);
    }
  }

  // Welds bit-identical positions so shared vertices connect across
  // primitives that split them for UV or normal seams.
  std::int32_t intern_position(const Eigen::Vector3d& p) {
    auto [it, inserted] = position_ids_.try_emplace(
        PositionKey{{p.x(), p.y(), p.z()}}, static_cast<std::int32_t>(mesh_.positions.size()));
    if (inserted) mesh_.positions.push_back(p);
    return it->second;
  }

  const GltfDocument& doc_;
  TriMesh& mesh_;
  std::map<PositionKey, std::int32_t> position_ids_;
};

}  // namespace

TriMesh load_gltf(const std::filesystem::path& path) {
  const GltfDocument doc(path);
  TriMesh mesh;
  mesh.name = path.stem().string();
  GltfMeshBuilder builder(doc, mesh);
  const json& root = doc.root();
  try {
    std::vector<int> roots;
    if (root.contains("scenes") && !root.at("scenes").empty()) {
      const int scene = root.value("scene", 0);
      roots = root.at("scenes").at(scene).value("nodes", std::vector<int>{});
    } else if (root.contains("nodes")) {
      std::vector<bool> is_child(root.at("nodes").size(), false);
      for (const json& node : root.at("nodes")) {
        for (const json& child : node.value("children", json::array())) {
          is_child.at(child.get<int>()) = true;
        }
      }
      for (std::size_t i = 0; i < is_child.size(); ++i) {
        if (!is_child[i]) roots.push_back(static_cast<int>(i));
      }
    }
    for (int node : roots) builder.visit(node, Eigen::Matrix4d::Identity(), 0);
  } catch (const nlohmann::json::exception& e) {
    throw MeshError("gltf: malformed document '" + mesh.name + "': " + e.what());
  }
  // Drop labels of mesh-less or triangle-less groups.
  std::vector<std::int32_t> remap(mesh.group_names.size(), -1);
  std::vector<std::string> names;
  for (auto& label : mesh.face_component) {
    if (remap[label] < 0) {
      remap[label] = static_cast<std::int32_t>(names.size());
      names.push_back(mesh.group_names[label]);
    }
    label = remap[label];
  }
  mesh.group_names = std::move(names);
  return mesh;
}

}  // namespace texbake
