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

namespace texbake::detail {

// Top-left style ownership: a pixel center exactly on an edge belongs to the
// triangle for which the edge points down, or left when horizontal.
inline bool owns_edge(double dx, double dy) { return dy > 0.0 || (dy == 0.0 && dx < 0.0); }

// Edge function of a -> b at (x, y), always evaluated from the
// lexicographically smaller endpoint so that two triangles sharing an edge
// get exactly opposite values and owns_edge decides ties.
inline double edge_function(double ax, double ay, double bx, double by, double x, double y) {
  if (bx < ax || (bx == ax && by < ay)) return -((ax - bx) * (y - by) - (ay - by) * (x - bx));
  return (bx - ax) * (y - ay) - (by - ay) * (x - ax);
}

}  // namespace texbake::detail
