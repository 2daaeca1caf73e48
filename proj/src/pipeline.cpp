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

#include "texbake/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "texbake/image.hpp"

namespace texbake {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;
using Timings = std::vector<std::pair<std::string, double>>;

// Runs one stage, records its wall time, and tags any failure with the
// stage name.
template <typename F>
auto run_stage(const std::string& name, Timings& timings, F&& body) {
  const auto start = Clock::now();
  auto record = [&] {
    timings.emplace_back(name, std::chrono::duration<double>(Clock::now() - start).count());
  };
  try {
    if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
      body();
      record();
    } else {
      auto result = body();
      record();
      return result;
    }
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

std::string view_name(int index, std::string_view suffix) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "view_%03d_%s", index, std::string(suffix).c_str());
  return buffer;
}

bool starts_with(std::string_view text, std::string_view prefix) {
  return text.substr(0, prefix.size()) == prefix;
}

TriMesh load_segmented(const PipelineConfig& config, Timings& timings,
                       ValidationReport* validation = nullptr) {
  TriMesh mesh = run_stage("load", timings, [&] {
    return load_mesh(config.mesh, config.format, validation);
  });
  run_stage("segment", timings, [&] {
    segment_components(mesh, resolve_segmentation(config.segmentation, mesh));
  });
  return mesh;
}

OrbitSpec make_orbit(const PipelineConfig& config, const TriMesh& mesh, int frames) {
  return default_orbit(mesh, frames, config.radius_scale, config.orbit_height, config.render_size);
}

void write_condition_pngs(const fs::path& dir, int index, const ConditionMaps& maps) {
  write_png(dir / view_name(index, "normal.png"), maps.normal_map);
  write_png(dir / view_name(index, "depth.png"), maps.depth_map);
  write_png(dir / view_name(index, "edge.png"), maps.edge_map);
  write_png(dir / view_name(index, "render.png"), maps.render);
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return 99.0;
  return std::min(99.0, 10.0 * std::log10(1.0 / mse));
}

std::string format_number(double value) {
  std::ostringstream out;
  out.precision(10);
  out << value;
  return out.str();
}

void write_mtl(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "newmtl baked\n"
      << "Ka 1 1 1\n"
      << "Kd 1 1 1\n"
      << "Ks 0 0 0\n"
      << "d 1\n"
      << "illum 1\n"
      << "map_Kd texture.png\n";
}

}  // namespace

void PipelineConfig::check() const {
  check_geometry();
  check_sources();
}

void PipelineConfig::check_geometry() const {
  if (resolution < 64 || resolution > 4096 || !std::has_single_bit(static_cast<unsigned>(resolution))) {
    throw std::invalid_argument("resolution must be a power of two in [64, 4096], got " +
                                std::to_string(resolution));
  }
  if (frames < 1 || frames > 256) {
    throw std::invalid_argument("frames must be in [1, 256], got " + std::to_string(frames));
  }
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be >= 1");
  if (render_size < 16) throw std::invalid_argument("render size must be at least 16");
  if (!(radius_scale > 0.0)) throw std::invalid_argument("radius scale must be positive");
  if (!(depth_eps >= 0.0) || !(depth_eps_scene >= 0.0)) {
    throw std::invalid_argument("depth epsilon must be non-negative");
  }
  if (!(edges.low >= 0.0 && edges.low <= edges.high && edges.high <= 1.0)) {
    throw std::invalid_argument("edge thresholds must satisfy 0 <= low <= high <= 1");
  }
  if (!(tau >= 0.0)) throw std::invalid_argument("tau must be non-negative");
  if (dilation < 0) throw std::invalid_argument("dilation must be non-negative");
}

void PipelineConfig::check_sources() const {
  if (source.empty()) throw std::invalid_argument("a frame source is required");
  if (inpaint != "diffuse" && inpaint != "none" && !starts_with(inpaint, "remote:")) {
    throw std::invalid_argument("inpaint must be diffuse, none or remote:<url>");
  }
}

nlohmann::json BakeReport::to_json() const {
  auto metrics = [](const QualityMetrics& m) {
    return nlohmann::json{{"mae", m.mae},
                          {"mae_max", m.mae_max},
                          {"mae_mean", m.mae_mean},
                          {"psnr", m.psnr},
                          {"texels", m.texels}};
  };
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& [name, seconds] : stage_seconds) {
    stages.push_back({{"stage", name}, {"seconds", seconds}});
  }
  nlohmann::json out{{"faces", faces},
                     {"components", components},
                     {"views", views},
                     {"alpha", alpha},
                     {"resolution", resolution},
                     {"covered", covered},
                     {"core", core},
                     {"overlap", overlap},
                     {"filled", filled},
                     {"masked", masked},
                     {"inpainted", inpainted},
                     {"filled_after_inpaint", filled_after_inpaint},
                     {"unreachable", unreachable},
                     {"seedless_components", seedless_components},
                     {"visible_fraction", visible_fraction},
                     {"mean_effective_view_count", mean_effective_view_count},
                     {"stages", stages},
                     {"total_seconds", total_seconds}};
  if (confident) out["confident_metrics"] = metrics(*confident);
  if (overall) out["overall_metrics"] = metrics(*overall);
  return out;
}

SegmentStrategy resolve_segmentation(Segmentation choice, const TriMesh& mesh) {
  switch (choice) {
    case Segmentation::kFileGroups:
      return SegmentStrategy::kFileGroups;
    case Segmentation::kConnectivity:
      return SegmentStrategy::kConnectivity;
    case Segmentation::kAuto:
      break;
  }
  // Files that never declared a group only carry the loader's fallback label.
  const bool declared = std::any_of(mesh.group_names.begin(), mesh.group_names.end(),
                                    [](const std::string& name) { return name != "default"; });
  return declared ? SegmentStrategy::kFileGroups : SegmentStrategy::kConnectivity;
}

Segmentation parse_segmentation(std::string_view name) {
  if (name == "auto") return Segmentation::kAuto;
  if (name == "groups" || name == "file_groups") return Segmentation::kFileGroups;
  if (name == "connectivity") return Segmentation::kConnectivity;
  throw std::invalid_argument("segmentation must be auto, groups or connectivity");
}

QualityMetrics compare_to_ground_truth(const TexelTable& texels, const RgbF& texture,
                                       const RgbF& ground_truth,
                                       const std::vector<std::uint8_t>* include) {
  QualityMetrics m;
  std::array<double, 3> abs_sum{};
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < texels.entries.size(); ++i) {
    if (include && !(*include)[i]) continue;
    const TexelEntry& e = texels.entries[i];
    const Eigen::Vector3f truth = sample_bilinear_wrap(ground_truth, e.uv.x(), e.uv.y());
    for (int c = 0; c < 3; ++c) {
      const double d = static_cast<double>(texture(e.x, e.y, c)) - truth[c];
      abs_sum[c] += std::abs(d);
      sq_sum += d * d;
    }
    ++m.texels;
  }
  if (m.texels == 0) return m;
  for (int c = 0; c < 3; ++c) {
    m.mae[c] = abs_sum[c] / static_cast<double>(m.texels);
    m.mae_max = std::max(m.mae_max, m.mae[c]);
    m.mae_mean += m.mae[c] / 3.0;
  }
  m.psnr = psnr_from_mse(sq_sum / (3.0 * static_cast<double>(m.texels)));
  return m;
}

PreparedBake prepare_bake(const PipelineConfig& config) {
  config.check();
  PreparedBake prepared;
  Timings& timings = prepared.stage_seconds;
  const fs::path debug_dir = config.output / "debug";
  if (config.write_outputs) fs::create_directories(config.output);
  if (config.write_outputs && config.debug) {
    fs::create_directories(debug_dir / "conditions");
    fs::create_directories(debug_dir / "frames");
    fs::create_directories(debug_dir / "confidence");
  }

  prepared.mesh = load_segmented(config, timings);
  const TriMesh& mesh = prepared.mesh;

  run_stage("orbit", timings, [&] {
    prepared.orbit = make_orbit(config, mesh, config.frames);
    prepared.cameras = orbit_cameras(prepared.orbit);
  });

  FrameRequest request;
  run_stage("conditions", timings, [&] {
    request.prompt = config.prompt;
    request.seed = config.seed;
    request.strengths = config.strengths;
    for (std::size_t t = 0; t < prepared.cameras.size(); ++t) {
      const Camera& camera = prepared.cameras[t];
      const GBuffer gbuffer = rasterize(mesh, camera);
      ViewConditions view{static_cast<int>(t), camera, condition_maps(gbuffer, camera, config.edges)};
      if (config.write_outputs && config.debug) {
        write_condition_pngs(debug_dir / "conditions", view.index, view.maps);
      }
      request.views.push_back(std::move(view));
    }
    request.check();
  });

  if (!config.ground_truth.empty()) {
    prepared.ground_truth = to_float(read_png_rgb(config.ground_truth));
  } else if (starts_with(config.source, "oracle:")) {
    prepared.ground_truth = to_float(read_png_rgb(config.source.substr(7)));
  }

  FrameSequence frames = run_stage("generate", timings, [&] {
    std::unique_ptr<FrameSource> source = make_frame_source(config.source, mesh);
    FrameSequence sequence = source->generate(request);
    if (sequence.frames.size() != request.views.size()) {
      throw FrameSourceError("source returned " + std::to_string(sequence.frames.size()) +
                             " frames for " + std::to_string(request.views.size()) + " views");
    }
    return sequence;
  });
  if (config.write_outputs && config.debug) {
    for (std::size_t t = 0; t < frames.frames.size(); ++t) {
      write_png(FileFrameSource::frame_path(debug_dir / "frames", static_cast<int>(t)),
                frames.frames[t]);
    }
  }
  request.views.clear();

  run_stage("uv_raster", timings, [&] {
    prepared.texels = rasterize_uv(mesh, config.resolution, config.dilation);
    prepared.labels = ComponentLabelMap::from_texels(prepared.texels);
  });

  run_stage("project", timings, [&] {
    const DepthTolerance tolerance{config.depth_eps,
                                   config.depth_eps_scene * bounding_radius(mesh)};
    for (std::size_t t = 0; t < prepared.cameras.size(); ++t) {
      const Camera& camera = prepared.cameras[t];
      const GBuffer gbuffer = rasterize(mesh, camera);
      std::vector<ViewSample> all =
          project_view(prepared.texels, camera, frames.frames[t], gbuffer, tolerance);
      if (config.write_outputs && config.debug) {
        write_png(debug_dir / "confidence" / view_name(static_cast<int>(t), "confidence.png"),
                  confidence_image(prepared.texels, all));
      }
      std::erase_if(all, [](const ViewSample& s) { return !s.visible; });
      prepared.samples.push_back(std::move(all));
    }
  });
  return prepared;
}

BakeResult finish_bake(const PreparedBake& prepared, const PipelineConfig& config) {
  config.check();
  BakeResult result;
  BakeReport& report = result.report;
  Timings timings = prepared.stage_seconds;
  const TexelTable& texels = prepared.texels;
  const fs::path debug_dir = config.output / "debug";

  std::optional<BlendAccumulator> acc;
  BakedTexture baked = run_stage("blend", timings, [&] {
    acc.emplace(texels, config.alpha);
    for (const auto& samples : prepared.samples) acc->accumulate(samples);
    return finalize(*acc);
  });

  report.faces = prepared.mesh.face_count();
  report.components = prepared.mesh.component_count();
  report.views = static_cast<int>(prepared.cameras.size());
  report.alpha = config.alpha;
  report.resolution = config.resolution;
  report.covered = texels.entries.size();
  report.core = texels.core_count;
  report.overlap = texels.overlap_texels;
  report.filled = baked.filled_count();
  report.mean_effective_view_count = mean_effective_view_count(*acc);

  std::vector<std::uint8_t> core(texels.entries.size(), 0);
  std::vector<std::uint8_t> confident(texels.entries.size(), 0);
  std::size_t visible_core = 0;
  for (std::size_t i = 0; i < texels.entries.size(); ++i) {
    if (texels.entries[i].dilated) continue;
    core[i] = 1;
    if (acc->sums(i).samples > 0) ++visible_core;
    if (acc->sums(i).raw_weight >= 0.5) confident[i] = 1;
  }
  report.visible_fraction =
      texels.core_count ? static_cast<double>(visible_core) / texels.core_count : 0.0;

  if (config.write_outputs && config.debug) {
    fs::create_directories(debug_dir);
    write_png(debug_dir / "texture_blended.png", export_texture(baked, true));
    write_png(debug_dir / "confidence_accumulated.png", export_confidence(baked));
    write_png(debug_dir / "components.png", render_component_map(prepared.labels));
    write_file(debug_dir / "components_indexed.png", encode_component_png(prepared.labels));
  }

  const OcclusionMask mask = occlusion_mask(*acc, prepared.labels, config.tau);
  acc.reset();
  report.masked = mask.count();
  if (config.write_outputs && config.debug) write_png(debug_dir / "occlusion_mask.png", mask.image());

  BakedTexture final_texture = run_stage("inpaint", timings, [&] {
    InpaintReport inpaint;
    BakedTexture out;
    if (config.inpaint == "diffuse") {
      out = inpaint_diffuse(baked, mask, prepared.labels, config.inpaint_options, &inpaint);
    } else if (starts_with(config.inpaint, "remote:")) {
      RemoteInpaintRequest request{config.prompt, config.strengths.component};
      out = inpaint_remote(baked, mask, prepared.labels, request,
                           Endpoint::parse(config.inpaint.substr(7)), {}, &inpaint);
    } else {
      out = baked;
    }
    report.inpainted = inpaint.inpainted;
    report.unreachable = inpaint.unreachable;
    report.seedless_components = inpaint.seedless_components;
    return out;
  });
  report.filled_after_inpaint = final_texture.filled_count();

  result.image = run_stage("export", timings, [&] {
    Rgb8 image = export_texture(final_texture, config.debug);
    if (config.write_outputs) {
      write_png(config.output / "texture.png", image);
      write_mtl(config.output / "material.mtl");
      write_obj(config.output / "mesh.obj", prepared.mesh, "material.mtl", "baked");
    }
    return image;
  });

  if (prepared.ground_truth) {
    const RgbF exported = to_float(result.image);
    report.confident = compare_to_ground_truth(texels, exported, *prepared.ground_truth, &confident);
    report.overall = compare_to_ground_truth(texels, exported, *prepared.ground_truth, &core);
  }

  report.stage_seconds = timings;
  for (const auto& [name, seconds] : timings) report.total_seconds += seconds;
  if (config.write_outputs) {
    std::ofstream out(config.output / "bake_report.json");
    out << report.to_json().dump(2) << '\n';
  }
  result.texture = std::move(final_texture);
  return result;
}

BakeResult bake(const PipelineConfig& config) {
  return finish_bake(prepare_bake(config), config);
}

int write_conditions(const PipelineConfig& config, bool dump_depth) {
  config.check_geometry();
  Timings timings;
  const TriMesh mesh = load_segmented(config, timings);
  const std::vector<Camera> cameras = orbit_cameras(make_orbit(config, mesh, config.frames));
  fs::create_directories(config.output);
  run_stage("conditions", timings, [&] {
    for (std::size_t t = 0; t < cameras.size(); ++t) {
      const GBuffer gbuffer = rasterize(mesh, cameras[t]);
      write_condition_pngs(config.output, static_cast<int>(t),
                           condition_maps(gbuffer, cameras[t], config.edges));
      if (dump_depth) {
        write_depth_binary(config.output / view_name(static_cast<int>(t), "depth.bin"), gbuffer);
      }
    }
  });
  return static_cast<int>(cameras.size());
}

std::vector<AlphaRow> ablate_alpha(const PipelineConfig& config, const std::vector<double>& alphas) {
  PipelineConfig quiet = config;
  quiet.write_outputs = false;
  quiet.debug = false;
  const PreparedBake prepared = prepare_bake(quiet);
  if (!prepared.ground_truth) {
    throw PipelineError("ablate", "alpha ablation needs a ground truth texture");
  }
  std::vector<AlphaRow> rows;
  if (config.write_outputs) fs::create_directories(config.output);
  for (double alpha : alphas) {
    quiet.alpha = alpha;
    const BakeResult result = finish_bake(prepared, quiet);
    const QualityMetrics& m = *result.report.confident;
    rows.push_back({alpha, m.mae_mean, m.psnr, result.report.mean_effective_view_count});
    if (config.write_outputs) {
      write_png(config.output / ("confidence_alpha_" + format_number(alpha) + ".png"),
                export_confidence(result.texture));
    }
  }
  if (config.write_outputs) {
    std::ofstream out(config.output / "ablation_alpha.csv");
    out << "alpha,mae,psnr,mean_effective_view_count\n";
    for (const AlphaRow& r : rows) {
      out << format_number(r.alpha) << ',' << format_number(r.mae) << ',' << format_number(r.psnr)
          << ',' << format_number(r.mean_effective_view_count) << '\n';
    }
  }
  return rows;
}

std::vector<FramerateRow> ablate_framerate(const PipelineConfig& config,
                                           const std::vector<int>& frame_counts) {
  PipelineConfig quiet = config;
  quiet.write_outputs = false;
  quiet.debug = false;
  std::vector<FramerateRow> rows;
  for (int frames : frame_counts) {
    quiet.frames = frames;
    const auto start = Clock::now();
    const BakeResult result = bake(quiet);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (!result.report.overall) {
      throw PipelineError("ablate", "frame-rate ablation needs a ground truth texture");
    }
    rows.push_back({frames, result.report.visible_fraction, result.report.overall->mae_mean,
                    result.report.overall->psnr, seconds});
  }
  if (config.write_outputs) {
    fs::create_directories(config.output);
    std::ofstream out(config.output / "ablation_framerate.csv");
    out << "T,visible_fraction,mae,psnr,wall_time\n";
    for (const FramerateRow& r : rows) {
      out << r.frames << ',' << format_number(r.visible_fraction) << ',' << format_number(r.mae)
          << ',' << format_number(r.psnr) << ',' << format_number(r.wall_seconds) << '\n';
    }
  }
  return rows;
}

MeshSummary inspect_mesh(const fs::path& path, Segmentation segmentation) {
  MeshSummary summary;
  TriMesh mesh = load_mesh(path, MeshFormat::kAuto, &summary.validation);
  summary.file_groups = static_cast<int>(mesh.group_names.size());
  segment_components(mesh, resolve_segmentation(segmentation, mesh));
  summary.name = mesh.name;
  summary.positions = mesh.positions.size();
  summary.faces = mesh.faces.size();
  summary.uvs = mesh.uvs.size();
  summary.components = mesh.component_count();
  summary.component_list = components(mesh);
  summary.bounds = bounding_box(mesh);
  for (const Face& face : mesh.faces) summary.uv_area += 0.5 * std::abs(uv_double_area(mesh, face));
  return summary;
}

}  // namespace texbake
