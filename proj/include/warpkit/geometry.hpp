// Copyright 2026 The warpkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>

namespace warpkit {

/// A 2-vector. In NDC, `x` is the horizontal (column) axis and `y` the
/// vertical (row) axis, both spanning [-1, 1] over the image.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// NDC coordinate of the center of pixel index `i` along an axis of `n`
/// pixels: (2i + 1) / n - 1.
inline double pixel_center_ndc(int i, int n) {
  return (2.0 * i + 1.0) / n - 1.0;
}

/// Inverse of pixel_center_ndc: continuous pixel coordinate of NDC `u`.
inline double ndc_to_pixel(double u, int n) {
  return ((u + 1.0) * n - 1.0) * 0.5;
}

}  // namespace warpkit
