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

#include <cstdint>
#include <random>

#include "warpkit/image.hpp"
#include "warpkit/tps.hpp"

namespace warpkit {

using Rng = std::mt19937_64;

/// Uniform noise blurred with a Gaussian of `sigma` pixels (clamped
/// borders), then stretched to span exactly [0, 1].
Image smooth_noise_image(Rng& rng, int height, int width, int channels, double sigma);

/// Separable Gaussian blur with clamp-to-edge borders.
Image gaussian_blur(const Image& image, double sigma);

/// `count` points uniform in [-extent, extent]^2, pairwise at least
/// `min_separation` apart (rejection sampling).
std::vector<Vec2> random_points(Rng& rng, std::size_t count, double extent, double min_separation);

/// Random points with displacements uniform in a box and rescaled so the
/// largest absolute component equals `magnitude` exactly.
ControlPointSet random_control_points(Rng& rng, std::size_t count, double extent, double magnitude);

/// ceil(sqrt(k)) x ceil(sqrt(k)) uniform lattice over [-extent, extent]^2,
/// truncated to the first k points in row-major order.
std::vector<Vec2> grid_points(std::size_t count, double extent);

}  // namespace warpkit
