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

#include <charconv>
#include <string>
#include <string_view>
#include <unordered_map>

#include "texbake/mesh.hpp"

namespace texbake {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view next_token(std::string_view& s) {
  const auto start = s.find_first_not_of(" \t\r");
  if (start == std::string_view::npos) {
    s = {};
    return {};
  }
  const auto end = s.find_first_of(" \t\r", start);
  std::string_view token = s.substr(start, end == std::string_view::npos ? s.npos : end - start);
  s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
  return token;
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw MeshError("obj line " + std::to_string(line) + ": bad number '" + std::string(token) + "'");
  }
  return value;
}

// Resolves a 1-based (or negative, relative) OBJ index; -1 when absent.
std::int32_t parse_index(std::string_view token, std::size_t count, std::size_t line) {
  if (token.empty()) return -1;
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value == 0) {
    throw MeshError("obj line " + std::to_string(line) + ": bad index '" + std::string(token) + "'");
  }
  const long resolved = value > 0 ? value - 1 : static_cast<long>(count) + value;
  if (resolved < 0 || resolved >= static_cast<long>(count)) {
    throw MeshError("obj line " + std::to_string(line) + ": index " + std::to_string(value) +
                    " out of range");
  }
  return static_cast<std::int32_t>(resolved);
}

}  // namespace

TriMesh parse_obj(std::string_view text, std::string name) {
  TriMesh mesh;
  mesh.name = std::move(name);
  std::unordered_map<std::string, std::int32_t> group_ids;
  std::int32_t current_group = -1;

  auto group_for = [&](const std::string& group_name) {
    auto [it, inserted] =
        group_ids.try_emplace(group_name, static_cast<std::int32_t>(mesh.group_names.size()));
    if (inserted) mesh.group_names.push_back(group_name);
    return it->second;
  };

  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    std::string_view rest = line;
    const std::string_view keyword = next_token(rest);
    if (keyword == "v") {
      Eigen::Vector3d p;
      for (int i = 0; i < 3; ++i) p[i] = parse_double(next_token(rest), line_no);
      mesh.positions.push_back(p);
    } else if (keyword == "vn") {
      Eigen::Vector3d n;
      for (int i = 0; i < 3; ++i) n[i] = parse_double(next_token(rest), line_no);
      mesh.normals.push_back(n);
    } else if (keyword == "vt") {
      Eigen::Vector2d t;
      for (int i = 0; i < 2; ++i) t[i] = parse_double(next_token(rest), line_no);
      mesh.uvs.push_back(t);
    } else if (keyword == "g" || keyword == "o") {
      const std::string_view label = trim(rest);
      current_group = group_for(label.empty() ? std::string("default") : std::string(label));
    } else if (keyword == "f") {
      std::vector<Corner> polygon;
      for (std::string_view token = next_token(rest); !token.empty(); token = next_token(rest)) {
        Corner corner;
        const auto slash1 = token.find('/');
        corner.position = parse_index(token.substr(0, slash1), mesh.positions.size(), line_no);
        corner.uv = -1;
        corner.normal = -1;
        if (slash1 != std::string_view::npos) {
          std::string_view tail = token.substr(slash1 + 1);
          const auto slash2 = tail.find('/');
          corner.uv = parse_index(tail.substr(0, slash2), mesh.uvs.size(), line_no);
          if (slash2 != std::string_view::npos) {
            corner.normal = parse_index(tail.substr(slash2 + 1), mesh.normals.size(), line_no);
          }
        }
        polygon.push_back(corner);
      }
      if (polygon.size() < 3) {
        throw MeshError("obj line " + std::to_string(line_no) + ": face with fewer than 3 vertices");
      }
      if (current_group < 0) current_group = group_for("default");
      for (std::size_t i = 1; i + 1 < polygon.size(); ++i) {
        mesh.faces.push_back({polygon[0], polygon[i], polygon[i + 1]});
        mesh.face_component.push_back(current_group);
      }
    }
    // Other statements (mtllib, usemtl, s, l, p) carry nothing we bake.
  }

  // Drop groups that never received faces so labels stay contiguous.
  std::vector<std::int32_t> remap(mesh.group_names.size(), -1);
  std::vector<std::string> used_names;
  for (auto& label : mesh.face_component) {
    if (remap[label] < 0) {
      remap[label] = static_cast<std::int32_t>(used_names.size());
      used_names.push_back(mesh.group_names[label]);
    }
    label = remap[label];
  }
  mesh.group_names = std::move(used_names);
  return mesh;
}

}  // namespace texbake
