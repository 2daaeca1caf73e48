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
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "texbake/blend.hpp"
#include "texbake/camera.hpp"
#include "texbake/frame_source.hpp"
#include "texbake/inpaint.hpp"
#include "texbake/mesh.hpp"
#include "texbake/raster.hpp"
#include "texbake/uv_project.hpp"

namespace texbake {

enum class Segmentation { kAuto, kFileGroups, kConnectivity };

struct PipelineConfig {
  std::filesystem::path mesh;
  std::filesystem::path output = "out";
  MeshFormat format = MeshFormat::kAuto;
  Segmentation segmentation = Segmentation::kAuto;

  int resolution = 1024;   // texture atlas side
  int frames = 8;          // orbit views T
  double alpha = 8.0;
  int render_size = 1024;  // condition maps and frames
  double radius_scale = 1.8;
  double orbit_height = 0.0;
  int dilation = 2;

  EdgeOptions edges;
  double depth_eps = 1e-3;        // relative
  double depth_eps_scene = 1e-4;  // absolute, times the bounding radius
  double tau = 1e-6;              // occlusion threshold on sum w^alpha

  std::string source;            // oracle:<png> | files:<dir> | remote:<url>
  std::string inpaint = "diffuse";  // diffuse | remote:<url> | none
  std::string prompt;
  std::uint64_t seed = 0;
  ControlStrengths strengths;
  InpaintOptions inpaint_options;

  // Texture compared against the bake for MAE/PSNR; defaults to the oracle
  // texture when the source is oracle:<png>.
  std::filesystem::path ground_truth;
  bool debug = false;
  bool write_outputs = true;

  // Throws std::invalid_argument on an out-of-range field.
  void check() const;
  // Split halves of check(); condition maps need only the geometry half.
  void check_geometry() const;
  void check_sources() const;
};

class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : std::runtime_error("stage '" + stage + "': " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct QualityMetrics {
  std::array<double, 3> mae{};  // per channel, [0,1] units
  double mae_max = 0.0;
  double mae_mean = 0.0;
  double psnr = 0.0;            // dB over all channels
  std::size_t texels = 0;
};

struct BakeReport {
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::size_t faces = 0;
  int components = 0;
  int views = 0;
  double alpha = 0.0;
  int resolution = 0;
  std::size_t covered = 0;   // atlas texels including the seam guard band
  std::size_t core = 0;      // covered texels inside a UV triangle
  std::size_t overlap = 0;
  std::size_t filled = 0;    // texels with blended color before inpainting
  std::size_t masked = 0;
  std::size_t inpainted = 0;
  std::size_t filled_after_inpaint = 0;
  std::size_t unreachable = 0;
  std::vector<int> seedless_components;
  double visible_fraction = 0.0;  // core texels seen by at least one view
  double mean_effective_view_count = 0.0;
  std::optional<QualityMetrics> confident;  // texels with sum w >= 0.5
  std::optional<QualityMetrics> overall;    // all core texels after inpainting
  double total_seconds = 0.0;

  nlohmann::json to_json() const;
};

// Everything up to and including per-view projection, reusable across
// alpha values.
struct PreparedBake {
  TriMesh mesh;
  OrbitSpec orbit;
  std::vector<Camera> cameras;
  TexelTable texels;
  ComponentLabelMap labels;
  // Visible samples only, one list per view.
  std::vector<std::vector<ViewSample>> samples;
  std::optional<RgbF> ground_truth;
  std::vector<std::pair<std::string, double>> stage_seconds;
};

struct BakeResult {
  BakeReport report;
  BakedTexture texture;  // after inpainting
  Rgb8 image;            // exported texture.png content
};

PreparedBake prepare_bake(const PipelineConfig& config);
// Blend, fill and export from prepared samples with config.alpha.
BakeResult finish_bake(const PreparedBake& prepared, const PipelineConfig& config);
BakeResult bake(const PipelineConfig& config);

// Writes condition maps for every orbit view and returns their count.
int write_conditions(const PipelineConfig& config, bool dump_depth);

struct AlphaRow {
  double alpha = 0.0;
  double mae = 0.0;
  double psnr = 0.0;
  double mean_effective_view_count = 0.0;
};
// One bake per alpha from a single preparation. Writes ablation_alpha.csv
// and confidence_alpha_<a>.png when config.write_outputs.
std::vector<AlphaRow> ablate_alpha(const PipelineConfig& config, const std::vector<double>& alphas);

struct FramerateRow {
  int frames = 0;
  double visible_fraction = 0.0;
  double mae = 0.0;
  double psnr = 0.0;
  double wall_seconds = 0.0;
};
// One full bake per frame count. Writes ablation_framerate.csv.
std::vector<FramerateRow> ablate_framerate(const PipelineConfig& config,
                                           const std::vector<int>& frame_counts);

// MAE/PSNR of `texture` against the ground truth sampled at texel centers.
QualityMetrics compare_to_ground_truth(const TexelTable& texels, const RgbF& texture,
                                       const RgbF& ground_truth,
                                       const std::vector<std::uint8_t>* include = nullptr);

SegmentStrategy resolve_segmentation(Segmentation choice, const TriMesh& mesh);
Segmentation parse_segmentation(std::string_view name);

struct MeshSummary {
  std::string name;
  std::size_t positions = 0;
  std::size_t faces = 0;
  std::size_t uvs = 0;
  int file_groups = 0;
  int components = 0;
  std::vector<Component> component_list;
  ValidationReport validation;
  BoundingBox bounds;
  double uv_area = 0.0;  // summed absolute UV triangle area
};
MeshSummary inspect_mesh(const std::filesystem::path& path, Segmentation segmentation);

}  // namespace texbake
