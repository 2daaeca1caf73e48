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

#include "texbake/camera.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

#include "texbake/mesh.hpp"

namespace texbake {

Camera::Frame Camera::frame() const {
  Frame f;
  f.forward = (target - position).normalized();
  Eigen::Vector3d right = f.forward.cross(up);
  if (right.norm() < 1e-9) right = f.forward.cross(Eigen::Vector3d::UnitX());
  f.right = right.normalized();
  f.true_up = f.right.cross(f.forward);
  return f;
}

Eigen::Matrix4d Camera::view_matrix() const {
  const Frame f = frame();
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.block<1, 3>(0, 0) = f.right.transpose();
  m.block<1, 3>(1, 0) = f.true_up.transpose();
  m.block<1, 3>(2, 0) = -f.forward.transpose();
  m(0, 3) = -f.right.dot(position);
  m(1, 3) = -f.true_up.dot(position);
  m(2, 3) = f.forward.dot(position);
  return m;
}

Eigen::Matrix4d Camera::projection_matrix() const {
  const double focal = 1.0 / std::tan(0.5 * vfov);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = focal / aspect();
  m(1, 1) = focal;
  m(2, 2) = -(far + near) / (far - near);
  m(2, 3) = -2.0 * far * near / (far - near);
  m(3, 2) = -1.0;
  return m;
}

void Camera::check() const {
  if (!position.allFinite() || !target.allFinite()) {
    throw CameraError("camera position/target must be finite");
  }
  if ((position - target).norm() <= 0.0) {
    throw CameraError("camera position coincides with its target");
  }
  if (!(vfov > 0.0 && vfov < std::numbers::pi)) {
    throw CameraError("vertical field of view must lie in (0, pi)");
  }
  if (!(near > 0.0 && near < far)) throw CameraError("require 0 < near < far");
  if (width <= 0 || height <= 0) throw CameraError("camera resolution must be positive");
}

std::optional<Projection> project_point(const Camera& camera, const Eigen::Vector3d& point) {
  const Eigen::Vector4d clip =
      camera.projection_matrix() * camera.view_matrix() * point.homogeneous();
  const double depth = clip.w();
  if (!(depth > camera.near)) return std::nullopt;
  const double ndc_x = clip.x() / depth;
  const double ndc_y = clip.y() / depth;
  Projection p;
  p.x = 0.5 * (ndc_x + 1.0) * camera.width;
  p.y = 0.5 * (1.0 - ndc_y) * camera.height;
  p.depth = depth;
  return p;
}

Eigen::Vector3d unproject(const Camera& camera, double x, double y, double depth) {
  const double ndc_x = 2.0 * x / camera.width - 1.0;
  const double ndc_y = 1.0 - 2.0 * y / camera.height;
  const double tan_half = std::tan(0.5 * camera.vfov);
  const Camera::Frame f = camera.frame();
  return camera.position + depth * (f.forward + ndc_x * tan_half * camera.aspect() * f.right +
                                    ndc_y * tan_half * f.true_up);
}

Eigen::Vector3d view_direction(const Camera& camera, const Eigen::Vector3d& point) {
  const Eigen::Vector3d d = camera.position - point;
  const double len = d.norm();
  if (!(len > 0.0)) throw CameraError("view direction undefined at the camera position");
  return d / len;
}

Eigen::Vector3d orbit_position(int t, const OrbitSpec& spec) {
  if (spec.frames < 1) throw CameraError("orbit needs at least one frame");
  if (t < 0 || t >= spec.frames) {
    throw CameraError("orbit frame index " + std::to_string(t) + " outside [0, " +
                      std::to_string(spec.frames) + ")");
  }
  const double angle = 2.0 * std::numbers::pi * t / spec.frames;
  return {spec.radius * std::cos(angle), spec.radius * std::sin(angle), spec.height};
}

std::vector<Camera> orbit_cameras(const OrbitSpec& spec) {
  if (!(spec.radius > 0.0) && spec.height == 0.0) {
    throw CameraError("orbit camera coincides with the target (radius 0, height 0)");
  }
  if (spec.radius < 0.0) throw CameraError("orbit radius must be non-negative");
  std::vector<Camera> cameras;
  cameras.reserve(spec.frames);
  for (int t = 0; t < spec.frames; ++t) {
    Camera camera;
    camera.position = spec.target + orbit_position(t, spec);
    camera.target = spec.target;
    camera.up = kWorldUp;
    camera.vfov = spec.vfov;
    camera.near = spec.near;
    camera.far = spec.far;
    camera.width = spec.width;
    camera.height = spec.height_px;
    camera.check();
    cameras.push_back(camera);
  }
  return cameras;
}

OrbitSpec default_orbit(const TriMesh& mesh, int frames, double radius_scale, double height,
                        int resolution) {
  OrbitSpec spec;
  const double bound = std::max(bounding_radius(mesh), 1e-6);
  spec.target = bounding_box(mesh).center();
  spec.radius = radius_scale * bound;
  spec.height = height;
  spec.frames = frames;
  const double distance = std::hypot(spec.radius, spec.height);
  spec.near = std::max(1e-4 * bound, 0.5 * (distance - bound));
  if (distance <= bound) spec.near = 1e-3 * bound;
  spec.far = distance + 2.0 * bound;
  spec.width = resolution;
  spec.height_px = resolution;
  return spec;
}

}  // namespace texbake
