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

#include <gtest/gtest.h>

#include "texbake/raster.hpp"

namespace texbake {
namespace {

TEST(CannyTest, ConstantImageHasNoEdges) {
  const GrayF image(40, 30, 0.6f);
  const Gray8 edges = canny(image, 0.05, 0.15);
  for (std::uint8_t v : edges.data()) EXPECT_EQ(v, 0);
}

TEST(CannyTest, VerticalStepGivesOnePixelWideLine) {
  GrayF image(64, 48, 0.0f);
  for (int y = 0; y < 48; ++y) {
    for (int x = 32; x < 64; ++x) image(x, y) = 1.0f;
  }
  const Gray8 edges = canny(image, 0.1, 0.3);
  for (int y = 0; y < 48; ++y) {
    int count = 0;
    int column = -1;
    for (int x = 0; x < 64; ++x) {
      if (edges(x, y)) {
        ++count;
        column = x;
      }
    }
    EXPECT_EQ(count, 1) << "row " << y;
    EXPECT_TRUE(column == 31 || column == 32) << "row " << y;
  }
}

TEST(CannyTest, CircleRadiusFifty) {
  const int size = 160;
  const double cx = 80.0, cy = 80.0, radius = 50.0;
  Gray8 image(size, size, 0);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const double r = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
      if (r <= radius) image(x, y) = 255;
    }
  }
  const Gray8 edges = canny(image, 0.05, 0.15);
  std::size_t count = 0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      if (!edges(x, y)) continue;
      ++count;
      EXPECT_NEAR(std::hypot(x + 0.5 - cx, y + 0.5 - cy), radius, 1.5) << x << "," << y;
    }
  }
  // Roughly one ring of pixels.
  EXPECT_GT(count, static_cast<std::size_t>(2 * M_PI * radius * 0.9));
  EXPECT_LT(count, static_cast<std::size_t>(2 * M_PI * radius * 1.6));
}

TEST(CannyTest, HysteresisKeepsWeakPixelsConnectedToStrongOnes) {
  // A step whose contrast fades along the edge: the weak tail survives only
  // because it connects to the strong head. A blurred step of contrast c
  // peaks near 0.5 c, so the head is strong and the tail weak.
  GrayF image(40, 60, 0.0f);
  for (int y = 0; y < 60; ++y) {
    const float contrast = 1.0f - 0.75f * y / 59.0f;
    for (int x = 20; x < 40; ++x) image(x, y) = contrast;
  }
  auto row_count = [](const Gray8& edges, int y) {
    int n = 0;
    for (int x = 0; x < edges.width(); ++x) n += edges(x, y) ? 1 : 0;
    return n;
  };
  const Gray8 linked = canny(image, 0.1, 0.3);
  const Gray8 strong_only = canny(image, 0.3, 0.3);
  EXPECT_EQ(row_count(linked, 55), 1);
  EXPECT_EQ(row_count(strong_only, 55), 0);
  EXPECT_EQ(row_count(strong_only, 5), 1);

  GrayF weak(40, 60, 0.0f);
  for (int y = 0; y < 60; ++y) {
    for (int x = 20; x < 40; ++x) weak(x, y) = 0.3f;
  }
  const Gray8 none = canny(weak, 0.1, 0.3);
  for (std::uint8_t v : none.data()) EXPECT_EQ(v, 0);
}

TEST(CannyTest, Deterministic) {
  GrayF image(50, 50);
  for (int y = 0; y < 50; ++y) {
    for (int x = 0; x < 50; ++x) image(x, y) = static_cast<float>((x * 7 + y * 13) % 17) / 16.0f;
  }
  EXPECT_EQ(canny(image, 0.1, 0.2), canny(image, 0.1, 0.2));
}

TEST(CannyTest, RejectsBadThresholds) {
  const GrayF image(8, 8, 0.0f);
  EXPECT_THROW(canny(image, 0.5, 0.2), std::invalid_argument);
  EXPECT_THROW(canny(image, -0.1, 0.2), std::invalid_argument);
  EXPECT_THROW(canny(image, 0.1, 1.5), std::invalid_argument);
}

}  // namespace
}  // namespace texbake
