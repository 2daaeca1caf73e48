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

// Command-line front end for the texture-baking pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "texbake/fixtures.hpp"
#include "texbake/mesh.hpp"
#include "texbake/pipeline.hpp"
#include "texbake/remote.hpp"

namespace fs = std::filesystem;
using namespace texbake;

namespace {

struct Options {
  PipelineConfig config;
  std::string format = "auto";
  std::string segmentation = "auto";
  std::string edge_source = "depth";
  bool dump_depth = false;
  std::vector<double> alphas = {1, 2, 4, 8, 16, 32};
  std::vector<int> frame_counts = {4, 8, 16, 24};
  std::vector<std::string> stats_paths;
  std::string fixture = "cube";
};

void add_mesh_options(CLI::App& app, Options& o) {
  app.add_option("mesh", o.config.mesh, "Input mesh (.obj, .gltf, .glb)")->required();
  app.add_option("-o,--output", o.config.output, "Output directory")->capture_default_str();
  app.add_option("--format", o.format, "Mesh format: auto, obj or gltf")->capture_default_str();
  app.add_option("--segmentation", o.segmentation, "Components: auto, groups or connectivity")
      ->capture_default_str();
}

void add_orbit_options(CLI::App& app, Options& o) {
  PipelineConfig& c = o.config;
  app.add_option("--frames", c.frames, "Orbit views T")->capture_default_str();
  app.add_option("--radius-scale", c.radius_scale, "Orbit radius over bounding radius")
      ->capture_default_str();
  app.add_option("--height", c.orbit_height, "Orbit height above the mesh center")
      ->capture_default_str();
  app.add_option("--render-size", c.render_size, "Condition map and frame size in pixels")
      ->capture_default_str();
  app.add_option("--edge-source", o.edge_source, "Canny input: depth, normal or render")
      ->capture_default_str();
  app.add_option("--edge-low", c.edges.low, "Canny low threshold")->capture_default_str();
  app.add_option("--edge-high", c.edges.high, "Canny high threshold")->capture_default_str();
}

void add_bake_options(CLI::App& app, Options& o) {
  PipelineConfig& c = o.config;
  add_mesh_options(app, o);
  add_orbit_options(app, o);
  app.add_option("--source", c.source, "oracle:<png>, files:<dir> or remote:<url>")->required();
  app.add_option("--inpaint", c.inpaint, "diffuse, none or remote:<url>")->capture_default_str();
  app.add_option("--resolution", c.resolution, "Texture resolution")->capture_default_str();
  app.add_option("--alpha", c.alpha, "Confidence exponent")->capture_default_str();
  app.add_option("--depth-eps", c.depth_eps, "Relative depth tolerance for visibility")
      ->capture_default_str();
  app.add_option("--depth-eps-scene", c.depth_eps_scene,
                 "Absolute depth tolerance as a fraction of the bounding radius")
      ->capture_default_str();
  app.add_option("--fill-low-confidence", c.tau,
                 "Inpaint texels whose summed w^alpha is below this")
      ->capture_default_str();
  app.add_option("--dilation", c.dilation, "Seam guard band in texels")->capture_default_str();
  app.add_option("--prompt", c.prompt, "Text prompt for remote services");
  app.add_option("--seed", c.seed, "Seed for remote services")->capture_default_str();
  app.add_option("--ground-truth", c.ground_truth, "Texture for MAE/PSNR reporting");
  app.add_flag("--debug", c.debug, "Write intermediate artifacts");
}

void finalize_options(Options& o) {
  o.config.format = o.format == "obj"    ? MeshFormat::kObj
                    : o.format == "gltf" ? MeshFormat::kGltf
                    : o.format == "auto" ? MeshFormat::kAuto
                                         : throw CLI::ValidationError("--format", o.format);
  o.config.segmentation = parse_segmentation(o.segmentation);
  o.config.edges.source = parse_edge_source(o.edge_source);
}

void print_report(const BakeReport& r) {
  std::printf("texels: covered %zu, core %zu, filled %zu, masked %zu, inpainted %zu\n", r.covered,
              r.core, r.filled, r.masked, r.inpainted);
  std::printf("visible fraction %.4f, mean effective views %.3f\n", r.visible_fraction,
              r.mean_effective_view_count);
  if (!r.seedless_components.empty()) {
    std::printf("seedless components:");
    for (int id : r.seedless_components) std::printf(" %d", id);
    std::printf("\n");
  }
  if (r.confident) {
    std::printf("confident texels %zu: MAE %.5f (max channel %.5f), PSNR %.2f dB\n",
                r.confident->texels, r.confident->mae_mean, r.confident->mae_max, r.confident->psnr);
  }
  std::printf("total %.2f s\n", r.total_seconds);
}

int run_stats(const std::vector<std::string>& paths, Segmentation segmentation) {
  std::vector<int> counts;
  for (const std::string& path : paths) {
    TriMesh mesh = load_mesh(path);
    segment_components(mesh, resolve_segmentation(segmentation, mesh));
    counts.push_back(mesh.component_count());
    std::printf("%s\t%d\n", path.c_str(), counts.back());
  }
  const ComponentHistogram h = component_stats(counts);
  const auto p = h.proportions();
  std::printf("components\tmeshes\tpercent\n");
  std::printf("1\t%zu\t%.2f\n2-10\t%zu\t%.2f\n>10\t%zu\t%.2f\n", h.single, p[0], h.few, p[1],
              h.many, p[2]);
  return 0;
}

int run_inspect(const Options& o) {
  const MeshSummary s = inspect_mesh(o.config.mesh, o.config.segmentation);
  std::printf("mesh %s\n", s.name.c_str());
  std::printf("positions %zu, faces %zu, uvs %zu\n", s.positions, s.faces, s.uvs);
  std::printf("bounds [%g %g %g] - [%g %g %g]\n", s.bounds.min.x(), s.bounds.min.y(),
              s.bounds.min.z(), s.bounds.max.x(), s.bounds.max.y(), s.bounds.max.z());
  std::printf("uv area %.4f\n", s.uv_area);
  std::printf("validation: %zu missing uvs, %zu wrapped uvs, %zu degenerate faces, normals %s\n",
              s.validation.missing_uvs, s.validation.out_of_range_uvs_wrapped,
              s.validation.degenerate_faces, s.validation.normals_recomputed ? "recomputed" : "kept");
  std::printf("file groups %d, components %d\n", s.file_groups, s.components);
  for (const Component& c : s.component_list) {
    std::printf("  component %d: %zu faces, uv [%.3f %.3f] - [%.3f %.3f]\n", c.id, c.faces.size(),
                c.uv_min.x(), c.uv_min.y(), c.uv_max.x(), c.uv_max.y());
  }
  return 0;
}

int run_fixture(const Options& o) {
  const fs::path out = o.config.output;
  fs::create_directories(out);
  TriMesh mesh;
  if (o.fixture == "cube") mesh = fixtures::make_cube();
  else if (o.fixture == "sphere") mesh = fixtures::make_uv_sphere();
  else if (o.fixture == "concentric") mesh = fixtures::make_concentric_spheres();
  else if (o.fixture == "torus") mesh = fixtures::make_torus();
  else if (o.fixture == "cup") mesh = fixtures::make_cup();
  else if (o.fixture == "star") mesh = fixtures::make_star_prism();
  else throw CLI::ValidationError("fixture", "unknown fixture '" + o.fixture + "'");
  write_obj(out / (o.fixture + ".obj"), mesh);
  write_png(out / "checker.png", fixtures::make_checker());
  std::printf("wrote %s and %s\n", (out / (o.fixture + ".obj")).c_str(),
              (out / "checker.png").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view texture baking for UV-mapped meshes"};
  app.set_config("--config", "", "TOML config; sections are named after subcommands");
  app.require_subcommand(1);
  Options o;

  CLI::App* bake_cmd = app.add_subcommand("bake", "Bake a texture from orbit frames");
  add_bake_options(*bake_cmd, o);

  CLI::App* conditions_cmd = app.add_subcommand("conditions", "Write condition maps and stop");
  add_mesh_options(*conditions_cmd, o);
  add_orbit_options(*conditions_cmd, o);
  conditions_cmd->add_flag("--dump-depth", o.dump_depth, "Also write raw float depth");

  CLI::App* alpha_cmd = app.add_subcommand("ablate-alpha", "Bake once per alpha");
  add_bake_options(*alpha_cmd, o);
  alpha_cmd->add_option("--alphas", o.alphas, "Alpha values")->capture_default_str();

  CLI::App* framerate_cmd = app.add_subcommand("ablate-framerate", "Bake once per frame count");
  add_bake_options(*framerate_cmd, o);
  framerate_cmd->add_option("--frame-counts", o.frame_counts, "Frame counts")
      ->capture_default_str();

  CLI::App* stats_cmd = app.add_subcommand("stats", "Component-count histogram over meshes");
  stats_cmd->add_option("meshes", o.stats_paths, "Mesh files")->required();
  stats_cmd->add_option("--segmentation", o.segmentation, "Components: auto, groups or connectivity")
      ->capture_default_str();

  CLI::App* inspect_cmd = app.add_subcommand("inspect", "Print mesh, UV and component summary");
  add_mesh_options(*inspect_cmd, o);

  CLI::App* fixture_cmd = app.add_subcommand("fixture", "Write a procedural test mesh and checker");
  fixture_cmd->add_option("name", o.fixture, "cube, sphere, concentric, torus, cup or star")
      ->capture_default_str();
  fixture_cmd->add_option("-o,--output", o.config.output, "Output directory")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (stats_cmd->parsed()) return run_stats(o.stats_paths, parse_segmentation(o.segmentation));
    if (fixture_cmd->parsed()) return run_fixture(o);
    finalize_options(o);
    if (inspect_cmd->parsed()) return run_inspect(o);
    if (conditions_cmd->parsed()) {
      const int views = write_conditions(o.config, o.dump_depth);
      std::printf("wrote condition maps for %d views to %s\n", views, o.config.output.c_str());
      return 0;
    }
    if (bake_cmd->parsed()) {
      const BakeResult result = bake(o.config);
      print_report(result.report);
      std::printf("wrote %s\n", (o.config.output / "texture.png").c_str());
      return 0;
    }
    if (alpha_cmd->parsed()) {
      for (const AlphaRow& r : ablate_alpha(o.config, o.alphas)) {
        std::printf("alpha %-6g MAE %.5f PSNR %6.2f effective views %.3f\n", r.alpha, r.mae,
                    r.psnr, r.mean_effective_view_count);
      }
      return 0;
    }
    if (framerate_cmd->parsed()) {
      for (const FramerateRow& r : ablate_framerate(o.config, o.frame_counts)) {
        std::printf("T %-3d visible %.4f MAE %.5f PSNR %6.2f time %.2f s\n", r.frames,
                    r.visible_fraction, r.mae, r.psnr, r.wall_seconds);
      }
      return 0;
    }
  } catch (const PipelineError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
