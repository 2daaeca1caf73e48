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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "texbake/camera.hpp"
#include "texbake/fixtures.hpp"

namespace texbake {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(OrbitTest, PositionExamples) {
  OrbitSpec spec;
  spec.radius = 1.0;
  spec.frames = 8;
  EXPECT_TRUE(orbit_position(0, spec).isApprox(Eigen::Vector3d(1, 0, 0), 1e-12));
  const Eigen::Vector3d half = orbit_position(4, spec);
  EXPECT_NEAR(half.x(), -1.0, 1e-12);
  EXPECT_NEAR(half.y(), 0.0, 1e-12);
  spec.radius = 2.0;
  spec.height = 1.5;
  const Eigen::Vector3d quarter = orbit_position(2, spec);
  EXPECT_NEAR(quarter.x(), 0.0, 1e-12);
  EXPECT_NEAR(quarter.y(), 2.0, 1e-12);
  EXPECT_EQ(quarter.z(), 1.5);
}

TEST(OrbitTest, IndexOutOfRangeThrows) {
  OrbitSpec spec;
  spec.frames = 4;
  EXPECT_THROW(orbit_position(4, spec), CameraError);
  EXPECT_THROW(orbit_position(-1, spec), CameraError);
}

TEST(OrbitTest, DegenerateOrbitThrows) {
  OrbitSpec spec;
  spec.radius = 0.0;
  spec.height = 0.0;
  EXPECT_THROW(orbit_cameras(spec), CameraError);
  spec.height = 2.0;  // straight overhead is allowed
  EXPECT_NO_THROW(orbit_cameras(spec));
}

TEST(OrbitTest, CirclePropertyAndSpacing) {
  for (int frames : {1, 3, 4, 8, 16, 24, 97}) {
    OrbitSpec spec;
    spec.radius = 2.7;
    spec.height = -0.4;
    spec.frames = frames;
    spec.target = Eigen::Vector3d(1, -2, 0.5);
    const auto cameras = orbit_cameras(spec);
    ASSERT_EQ(static_cast<int>(cameras.size()), frames);
    for (int t = 0; t < frames; ++t) {
      const Eigen::Vector3d rel = cameras[t].position - spec.target;
      EXPECT_NEAR(rel.head<2>().norm(), spec.radius, 1e-9);
      EXPECT_NEAR(rel.z(), spec.height, 1e-12);
      const double a0 = std::atan2(rel.y(), rel.x());
      const Eigen::Vector3d next = cameras[(t + 1) % frames].position - spec.target;
      double step = std::atan2(next.y(), next.x()) - a0;
      if (step <= 0) step += 2 * kPi;
      if (frames > 1) { EXPECT_NEAR(step, 2 * kPi / frames, 1e-9); }
      EXPECT_EQ(cameras[t].target, spec.target);
    }
  }
}

TEST(OrbitTest, AzimuthsForFourFrames) {
  OrbitSpec spec;
  spec.frames = 4;
  const auto cameras = orbit_cameras(spec);
  const double expected[] = {0, 90, 180, -90};
  for (int t = 0; t < 4; ++t) {
    const double azimuth = std::atan2(cameras[t].position.y(), cameras[t].position.x()) * 180 / kPi;
    EXPECT_NEAR(azimuth, expected[t], 1e-9);
  }
}

TEST(OrbitTest, DefaultOrbitFramesTheMesh) {
  const TriMesh cube = fixtures::make_cube(2.0, Eigen::Vector3d(3, 0, 1));
  const OrbitSpec spec = default_orbit(cube);
  EXPECT_EQ(spec.frames, 8);
  EXPECT_TRUE(spec.target.isApprox(Eigen::Vector3d(3, 0, 1)));
  EXPECT_NEAR(spec.radius, 1.8 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(spec.vfov, 50.0 * kPi / 180.0, 1e-15);
  // Every corner lies between the clip planes from every orbit camera.
  for (const Camera& camera : orbit_cameras(spec)) {
    for (const auto& p : cube.positions) {
      const auto projection = project_point(camera, p);
      ASSERT_TRUE(projection.has_value());
      EXPECT_GT(projection->depth, camera.near);
      EXPECT_LT(projection->depth, camera.far);
    }
  }
}

TEST(OrbitTest, Periodicity) {
  OrbitSpec spec;
  spec.radius = 1.3;
  spec.frames = 12;
  for (int t = 0; t < 12; ++t) {
    const double angle = 2 * kPi * (t + 12) / 12;
    EXPECT_NEAR(spec.radius * std::cos(angle), orbit_position(t, spec).x(), 1e-9);
    EXPECT_NEAR(spec.radius * std::sin(angle), orbit_position(t, spec).y(), 1e-9);
  }
}

TEST(ViewDirectionTest, Examples) {
  Camera camera;
  camera.position = Eigen::Vector3d(0, 0, 5);
  EXPECT_TRUE(view_direction(camera, Eigen::Vector3d::Zero()).isApprox(Eigen::Vector3d(0, 0, 1)));
  camera.position = Eigen::Vector3d(3, 0, 0);
  EXPECT_TRUE(view_direction(camera, Eigen::Vector3d(1, 0, 0)).isApprox(Eigen::Vector3d(1, 0, 0)));
  camera.position = Eigen::Vector3d(1, 1, 0);
  const double h = std::sqrt(0.5);
  EXPECT_TRUE(view_direction(camera, Eigen::Vector3d::Zero()).isApprox(Eigen::Vector3d(h, h, 0)));
  EXPECT_THROW(view_direction(camera, camera.position), CameraError);
}

// Look-at and perspective written out longhand, independent of the library.
struct Oracle {
  double m[4][4];
};

Oracle oracle_matrix(const Camera& c) {
  auto sub = [](const double a[3], const double b[3], double r[3]) {
    for (int i = 0; i < 3; ++i) r[i] = a[i] - b[i];
  };
  auto normalize = [](double v[3]) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (int i = 0; i < 3; ++i) v[i] /= n;
  };
  auto cross = [](const double a[3], const double b[3], double r[3]) {
    r[0] = a[1] * b[2] - a[2] * b[1];
    r[1] = a[2] * b[0] - a[0] * b[2];
    r[2] = a[0] * b[1] - a[1] * b[0];
  };
  const double eye[3] = {c.position.x(), c.position.y(), c.position.z()};
  const double at[3] = {c.target.x(), c.target.y(), c.target.z()};
  const double up[3] = {c.up.x(), c.up.y(), c.up.z()};
  double f[3], s[3], u[3];
  sub(at, eye, f);
  normalize(f);
  cross(f, up, s);
  normalize(s);
  cross(s, f, u);
  double view[4][4] = {{s[0], s[1], s[2], 0},
                       {u[0], u[1], u[2], 0},
                       {-f[0], -f[1], -f[2], 0},
                       {0, 0, 0, 1}};
  for (int r = 0; r < 3; ++r) view[r][3] = -(view[r][0] * eye[0] + view[r][1] * eye[1] + view[r][2] * eye[2]);
  const double t = 1.0 / std::tan(c.vfov / 2);
  const double a = static_cast<double>(c.width) / c.height;
  const double proj[4][4] = {{t / a, 0, 0, 0},
                             {0, t, 0, 0},
                             {0, 0, (c.far + c.near) / (c.near - c.far), 2 * c.far * c.near / (c.near - c.far)},
                             {0, 0, -1, 0}};
  Oracle out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) out.m[i][j] += proj[i][k] * view[k][j];
    }
  }
  return out;
}

TEST(ProjectTest, MatchesIndependentMatrixOracle) {
  Camera camera;
  camera.position = Eigen::Vector3d(2.5, -1.0, 0.7);
  camera.target = Eigen::Vector3d(0.1, 0.2, -0.3);
  camera.width = 640;
  camera.height = 480;
  camera.near = 0.1;
  camera.far = 50;
  const Oracle o = oracle_matrix(camera);
  const Eigen::Vector3d points[] = {{0, 0, 0}, {0.4, -0.3, 0.2}, {-1, 1, 0.5}, {0.3, 0.9, -0.8}};
  for (const auto& p : points) {
    double clip[4] = {0, 0, 0, 0};
    const double h[4] = {p.x(), p.y(), p.z(), 1};
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 4; ++k) clip[i] += o.m[i][k] * h[k];
    }
    const double x = (clip[0] / clip[3] + 1) * 0.5 * camera.width;
    const double y = (1 - clip[1] / clip[3]) * 0.5 * camera.height;
    const auto projection = project_point(camera, p);
    ASSERT_TRUE(projection.has_value());
    EXPECT_NEAR(projection->x, x, 1e-9);
    EXPECT_NEAR(projection->y, y, 1e-9);
    EXPECT_NEAR(projection->depth, clip[3], 1e-12);
  }
}

TEST(ProjectTest, TargetLandsAtImageCenter) {
  Camera camera;
  camera.position = Eigen::Vector3d(0, -4, 3);
  camera.target = Eigen::Vector3d::Zero();
  camera.width = 100;
  camera.height = 60;
  const auto p = project_point(camera, camera.target);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->x, 50.0, 1e-9);
  EXPECT_NEAR(p->y, 30.0, 1e-9);
  EXPECT_NEAR(p->depth, 5.0, 1e-12);
}

TEST(ProjectTest, BehindCameraIsRejected) {
  Camera camera;
  camera.position = Eigen::Vector3d(5, 0, 0);
  camera.target = Eigen::Vector3d::Zero();
  EXPECT_FALSE(project_point(camera, Eigen::Vector3d(8, 0, 0)));
  EXPECT_FALSE(project_point(camera, Eigen::Vector3d(5, 0.1, 0)));
}

TEST(ProjectTest, ImageOrientation) {
  Camera camera;
  camera.position = Eigen::Vector3d(5, 0, 0);
  camera.target = Eigen::Vector3d::Zero();
  // World up is screen up (smaller row); looking down -x, +y is screen right.
  EXPECT_LT(project_point(camera, Eigen::Vector3d(0, 0, 1))->y, camera.height / 2.0);
  EXPECT_GT(project_point(camera, Eigen::Vector3d(0, 1, 0))->x, camera.width / 2.0);
}

TEST(ProjectTest, UnprojectRoundTrip) {
  const TriMesh sphere = fixtures::make_uv_sphere(1.0, 24, 12);
  const OrbitSpec spec = default_orbit(sphere, 8, 2.5, 0.8, 512);
  for (const Camera& camera : orbit_cameras(spec)) {
    for (const auto& p : sphere.positions) {
      const auto projection = project_point(camera, p);
      ASSERT_TRUE(projection);
      const Eigen::Vector3d back = unproject(camera, projection->x, projection->y, projection->depth);
      EXPECT_LT((back - p).norm(), 1e-4);
    }
  }
}

TEST(CameraTest, UpSingularityFallsBackToXAxis) {
  Camera camera;
  camera.position = Eigen::Vector3d(0, 0, 3);
  camera.target = Eigen::Vector3d::Zero();
  const Camera::Frame f = camera.frame();
  EXPECT_TRUE(f.right.allFinite());
  EXPECT_NEAR(f.right.norm(), 1.0, 1e-12);
  EXPECT_NEAR(f.right.dot(f.forward), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(f.true_up.dot(Eigen::Vector3d::UnitX())), 1.0, 1e-12);
  EXPECT_TRUE(camera.view_matrix().allFinite());
  const auto p = project_point(camera, Eigen::Vector3d::Zero());
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->x, camera.width / 2.0, 1e-9);
}

TEST(CameraTest, CheckRejectsBadCameras) {
  Camera camera;
  EXPECT_NO_THROW(camera.check());
  Camera same = camera;
  same.target = same.position;
  EXPECT_THROW(same.check(), CameraError);
  Camera fov = camera;
  fov.vfov = std::numbers::pi;
  EXPECT_THROW(fov.check(), CameraError);
  Camera planes = camera;
  planes.near = 2;
  planes.far = 1;
  EXPECT_THROW(planes.check(), CameraError);
}

}  // namespace
}  // namespace texbake
