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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "texbake/camera.hpp"
#include "texbake/image.hpp"
#include "texbake/mesh.hpp"
#include "texbake/raster.hpp"
#include "texbake/remote.hpp"

namespace texbake {

struct ControlStrengths {
  double depth = 0.7;
  double normal = 0.7;
  double edge = 0.7;
  double component = 0.5;
};

// Condition maps for one orbit view, in orbit order.
struct ViewConditions {
  int index = 0;
  Camera camera;
  ConditionMaps maps;
};

struct FrameRequest {
  std::string prompt;
  std::uint64_t seed = 0;
  std::vector<ViewConditions> views;
  ControlStrengths strengths;

  // Throws std::invalid_argument on an empty view list, strengths outside
  // [0,1], or views of differing resolution.
  void check() const;
};

enum class Provenance { kProcedural, kFiles, kRemote };

struct FrameSequence {
  std::vector<Rgb8> frames;
  Provenance provenance = Provenance::kProcedural;
};

class FrameSourceError : public std::runtime_error {
 public:
  FrameSourceError(std::string message, int view = -1)
      : std::runtime_error(std::move(message)), view_(view) {}
  int view() const { return view_; }

 private:
  int view_;
};

// Produces one RGB frame per requested view, in request order.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual FrameSequence generate(const FrameRequest& request) = 0;
  virtual std::string describe() const = 0;
};

// Colors each covered pixel with the ground-truth texture at the pixel's
// interpolated UV (bilinear, wrap addressing); background is black.
Rgb8 oracle_frame(const TriMesh& mesh, const RgbF& ground_truth, const GBuffer& gbuffer);
FrameSequence procedural_oracle(const TriMesh& mesh, const RgbF& ground_truth,
                                std::span<const GBuffer> gbuffers);

// Deterministic stand-in for the video generator. Re-rasterizes each view
// from its camera. The mesh must outlive the source.
class OracleFrameSource final : public FrameSource {
 public:
  OracleFrameSource(const TriMesh& mesh, RgbF ground_truth)
      : mesh_(mesh), ground_truth_(std::move(ground_truth)) {}
  FrameSequence generate(const FrameRequest& request) override;
  std::string describe() const override { return "oracle"; }
  const RgbF& ground_truth() const { return ground_truth_; }

 private:
  const TriMesh& mesh_;
  RgbF ground_truth_;
};

// Reads <dir>/frame_{t:03}.png for each view index t.
class FileFrameSource final : public FrameSource {
 public:
  explicit FileFrameSource(std::filesystem::path directory) : directory_(std::move(directory)) {}
  FrameSequence generate(const FrameRequest& request) override;
  std::string describe() const override { return "files:" + directory_.string(); }

  static std::filesystem::path frame_path(const std::filesystem::path& directory, int index);

 private:
  std::filesystem::path directory_;
};

// Client of POST /v1/generate. One request per orbit.
class RemoteFrameSource final : public FrameSource {
 public:
  explicit RemoteFrameSource(Endpoint endpoint, RemoteOptions options = {})
      : endpoint_(std::move(endpoint)), options_(options) {}
  FrameSequence generate(const FrameRequest& request) override;
  std::string describe() const override { return "remote:" + endpoint_.url(); }

  static nlohmann::json encode_request(const FrameRequest& request);

 private:
  Endpoint endpoint_;
  RemoteOptions options_;
};

// Parses "oracle:<texture.png>", "files:<dir>" or "remote:<url>".
std::unique_ptr<FrameSource> make_frame_source(std::string_view spec, const TriMesh& mesh);

}  // namespace texbake
