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

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Geometry>

namespace texbake {

struct TriMesh;

// World vertical axis. Orbits circle around it.
inline const Eigen::Vector3d kWorldUp = Eigen::Vector3d::UnitZ();

class CameraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pinhole camera looking from `position` at `target`. Pixel (i, j) covers
// [i, i+1) x [j, j+1) with its center at (i + 0.5, j + 0.5); row 0 is the top.
struct Camera {
  Eigen::Vector3d position = Eigen::Vector3d::UnitX();
  Eigen::Vector3d target = Eigen::Vector3d::Zero();
  Eigen::Vector3d up = kWorldUp;
  double vfov = 0.872664625997164788;  // 50 degrees
  double near = 0.01;
  double far = 100.0;
  int width = 1024;
  int height = 1024;

  double aspect() const { return static_cast<double>(width) / height; }

  // Orthonormal camera frame. `forward` points from position to target;
  // `true_up` is the recomputed up vector. Falls back to the world x-axis as
  // up when the requested up is parallel to the view axis.
  struct Frame {
    Eigen::Vector3d right;
    Eigen::Vector3d true_up;
    Eigen::Vector3d forward;
  };
  Frame frame() const;

  // World -> view (OpenGL convention, camera looks down -z).
  Eigen::Matrix4d view_matrix() const;
  // View -> clip, OpenGL perspective; clip w equals view-space depth.
  Eigen::Matrix4d projection_matrix() const;

  // Throws CameraError when the camera is ill-formed.
  void check() const;
};

struct Projection {
  double x = 0.0;      // pixel coordinates, continuous
  double y = 0.0;
  double depth = 0.0;  // distance along the view axis
};

// nullopt when the point lies at or behind the near plane.
std::optional<Projection> project_point(const Camera& camera, const Eigen::Vector3d& point);

// Inverse of project_point for a pixel location and view-space depth.
Eigen::Vector3d unproject(const Camera& camera, double x, double y, double depth);

// Unit vector from `point` toward the camera position.
Eigen::Vector3d view_direction(const Camera& camera, const Eigen::Vector3d& point);

struct OrbitSpec {
  double radius = 1.0;
  double height = 0.0;  // relative to target, along the world vertical
  int frames = 8;
  Eigen::Vector3d target = Eigen::Vector3d::Zero();
  double vfov = 0.872664625997164788;
  double near = 0.01;
  double far = 100.0;
  int width = 1024;
  int height_px = 1024;
};

// Orbit point relative to the orbit target:
//   (r cos(2 pi t / T), r sin(2 pi t / T), z).
Eigen::Vector3d orbit_position(int t, const OrbitSpec& spec);

std::vector<Camera> orbit_cameras(const OrbitSpec& spec);

// Frames a mesh: target at the bounding-box center, radius scaled from the
// bounding-sphere radius, near/far enclosing the whole object.
OrbitSpec default_orbit(const TriMesh& mesh, int frames = 8, double radius_scale = 1.8,
                        double height = 0.0, int resolution = 1024);

}  // namespace texbake
