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

#include "texbake/frame_source.hpp"

#include <cstdio>
#include <utility>

#include "texbake/base64.hpp"

namespace texbake {

void FrameRequest::check() const {
  if (views.empty()) throw std::invalid_argument("frame request has no views");
  for (double s : {strengths.depth, strengths.normal, strengths.edge, strengths.component}) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("control strengths must lie in [0,1]");
  }
  const int w = views.front().camera.width;
  const int h = views.front().camera.height;
  for (const ViewConditions& view : views) {
    if (view.camera.width != w || view.camera.height != h) {
      throw std::invalid_argument("all views of a request must share one resolution");
    }
    const ConditionMaps& m = view.maps;
    for (const auto& [mw, mh] : {std::pair{m.normal_map.width(), m.normal_map.height()},
                                std::pair{m.depth_map.width(), m.depth_map.height()},
                                std::pair{m.edge_map.width(), m.edge_map.height()}}) {
      if (mw != w || mh != h) {
        throw std::invalid_argument("condition maps of view " + std::to_string(view.index) +
                                    " do not match the camera resolution");
      }
    }
  }
}

Rgb8 oracle_frame(const TriMesh& mesh, const RgbF& ground_truth, const GBuffer& gbuffer) {
  Rgb8 frame(gbuffer.width, gbuffer.height, 0);
  for (int y = 0; y < gbuffer.height; ++y) {
    for (int x = 0; x < gbuffer.width; ++x) {
      const std::size_t i = gbuffer.index(x, y);
      const std::int32_t f = gbuffer.face_id[i];
      if (f == kNoFace) continue;
      const Face& face = mesh.faces[f];
      const Eigen::Vector3f& w = gbuffer.bary[i];
      const Eigen::Vector2d uv = w[0] * mesh.uvs[face[0].uv] + w[1] * mesh.uvs[face[1].uv] +
                                 w[2] * mesh.uvs[face[2].uv];
      const Eigen::Vector3f color = sample_bilinear_wrap(ground_truth, uv.x(), uv.y());
      std::uint8_t* p = frame.at(x, y);
      for (int c = 0; c < 3; ++c) p[c] = to_byte(color[c]);
    }
  }
  return frame;
}

FrameSequence procedural_oracle(const TriMesh& mesh, const RgbF& ground_truth,
                                std::span<const GBuffer> gbuffers) {
  FrameSequence sequence;
  sequence.provenance = Provenance::kProcedural;
  sequence.frames.reserve(gbuffers.size());
  for (const GBuffer& gbuffer : gbuffers) {
    sequence.frames.push_back(oracle_frame(mesh, ground_truth, gbuffer));
  }
  return sequence;
}

FrameSequence OracleFrameSource::generate(const FrameRequest& request) {
  request.check();
  FrameSequence sequence;
  sequence.provenance = Provenance::kProcedural;
  for (const ViewConditions& view : request.views) {
    sequence.frames.push_back(oracle_frame(mesh_, ground_truth_, rasterize(mesh_, view.camera)));
  }
  return sequence;
}

std::filesystem::path FileFrameSource::frame_path(const std::filesystem::path& directory,
                                                  int index) {
  char name[32];
  std::snprintf(name, sizeof(name), "frame_%03d.png", index);
  return directory / name;
}

FrameSequence FileFrameSource::generate(const FrameRequest& request) {
  request.check();
  FrameSequence sequence;
  sequence.provenance = Provenance::kFiles;
  for (const ViewConditions& view : request.views) {
    const std::filesystem::path path = frame_path(directory_, view.index);
    if (!std::filesystem::exists(path)) {
      throw FrameSourceError("missing frame file " + path.string(), view.index);
    }
    Rgb8 frame;
    try {
      frame = read_png_rgb(path);
    } catch (const std::exception& e) {
      throw FrameSourceError("cannot read " + path.string() + ": " + e.what(), view.index);
    }
    if (frame.width() != view.camera.width || frame.height() != view.camera.height) {
      throw FrameSourceError("frame " + path.string() + " has size " +
                                 std::to_string(frame.width()) + "x" +
                                 std::to_string(frame.height()) + ", expected " +
                                 std::to_string(view.camera.width) + "x" +
                                 std::to_string(view.camera.height),
                             view.index);
    }
    sequence.frames.push_back(std::move(frame));
  }
  return sequence;
}

nlohmann::json RemoteFrameSource::encode_request(const FrameRequest& request) {
  nlohmann::json body;
  body["prompt"] = request.prompt;
  body["seed"] = request.seed;
  body["strengths"] = {{"depth", request.strengths.depth},
                       {"normal", request.strengths.normal},
                       {"edge", request.strengths.edge},
                       {"component", request.strengths.component}};
  body["width"] = request.views.front().camera.width;
  body["height"] = request.views.front().camera.height;
  nlohmann::json views = nlohmann::json::array();
  for (const ViewConditions& view : request.views) {
    nlohmann::json v;
    v["index"] = view.index;
    v["normal"] = png_base64(view.maps.normal_map);
    v["depth"] = png_base64(view.maps.depth_map);
    v["edge"] = png_base64(view.maps.edge_map);
    if (!view.maps.render.empty()) v["render"] = png_base64(view.maps.render);
    views.push_back(std::move(v));
  }
  body["views"] = std::move(views);
  return body;
}

FrameSequence RemoteFrameSource::generate(const FrameRequest& request) {
  request.check();
  const nlohmann::json reply = post_json(endpoint_, "/v1/generate", encode_request(request), options_);
  if (!reply.is_object() || !reply.contains("frames") || !reply.at("frames").is_array()) {
    throw RemoteError(RemoteError::Kind::kMalformed, "reply lacks a frames[] array");
  }
  const nlohmann::json& frames = reply.at("frames");
  if (frames.size() != request.views.size()) {
    throw FrameSourceError("remote returned " + std::to_string(frames.size()) + " frames for " +
                           std::to_string(request.views.size()) + " views");
  }
  FrameSequence sequence;
  sequence.provenance = Provenance::kRemote;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const int view = request.views[i].index;
    if (!frames[i].is_string()) {
      throw RemoteError(RemoteError::Kind::kMalformed, "frame entry is not a string", view);
    }
    Rgb8 frame;
    try {
      frame = rgb_from_png_base64(frames[i].get<std::string>());
    } catch (const std::exception& e) {
      throw RemoteError(RemoteError::Kind::kMalformed,
                        std::string("frame is not a base64 PNG: ") + e.what(), view);
    }
    if (frame.width() != request.views[i].camera.width ||
        frame.height() != request.views[i].camera.height) {
      throw RemoteError(RemoteError::Kind::kMalformed, "frame size does not match the request",
                        view);
    }
    sequence.frames.push_back(std::move(frame));
  }
  return sequence;
}

std::unique_ptr<FrameSource> make_frame_source(std::string_view spec, const TriMesh& mesh) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("frame source must be oracle:<png>, files:<dir> or remote:<url>");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string argument(spec.substr(colon + 1));
  if (kind == "oracle") {
    return std::make_unique<OracleFrameSource>(mesh, to_float(read_png_rgb(argument)));
  }
  if (kind == "files") return std::make_unique<FileFrameSource>(argument);
  if (kind == "remote") return std::make_unique<RemoteFrameSource>(Endpoint::parse(argument));
  throw std::invalid_argument("unknown frame source kind '" + std::string(kind) + "'");
}

}  // namespace texbake
