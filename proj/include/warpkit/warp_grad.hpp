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
#include <optional>
#include <vector>

#include "warpkit/image.hpp"
#include "warpkit/tps.hpp"

namespace warpkit {

/// Cotangents of <upstream, warp_image(...)> with respect to each input.
struct WarpCotangents {
  Image d_image;
  std::vector<Vec2> d_points;
  std::vector<Vec2> d_displacements;
};

/// Records the forward pass of warp_image so that the reverse pass can
/// reuse the factorized spline system and flow. The forward output equals
/// warp_image(image, control, alpha, lambda) bit for bit.
class WarpTape {
 public:
  WarpTape(Image image, ControlPointSet control, double alpha, double lambda = kDefaultTpsLambda);

  const Image& output() const noexcept { return output_; }
  const FlowField& flow() const noexcept { return flow_; }
  const TpsParameters& params() const noexcept { return params_; }

  /// Reverse pass through sampling, flow, spline parameters and the solve
  /// (adjoint rule: one transposed solve plus kernel-derivative terms).
  WarpCotangents vjp(const Image& upstream) const;

 private:
  Image image_;
  ControlPointSet control_;
  double alpha_;
  bool identity_;
  TpsSystem system_;
  Eigen::MatrixX2d solution_;
  TpsParameters params_;
  FlowField flow_;
  Image output_;
};

WarpCotangents warp_vjp(const Image& image, const ControlPointSet& control, double alpha,
                        double lambda, const Image& upstream);

/// A fully specified gradient-check instance.
struct GradientProblem {
  Image image;
  ControlPointSet control;
  double alpha = 1.0;
  double lambda = kDefaultTpsLambda;
  std::uint64_t seed = 0;  // drives the upstream weights and image-entry subset
};

struct GradientCheckOptions {
  double step = 1e-5;
  double rel_tolerance = 1e-4;
  double abs_floor = 1e-7;
  /// Pixels whose source location lies within this many pixels of a
  /// sampling-cell boundary get zero upstream weight.
  double boundary_margin = 1e-3;
  std::size_t image_entries = 64;
};

struct GradientReport {
  std::uint64_t seed = 0;
  int height = 0;
  int width = 0;
  std::size_t k = 0;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t checked = 0;
  /// Parameter coordinates whose +/- step moved a weighted sample across a
  /// cell boundary, where central differences are not meaningful.
  std::size_t skipped = 0;
  std::size_t masked_pixels = 0;
  bool pass = false;
};

/// Seeded instance: smooth 2-channel image, k random control points in
/// [-0.7, 0.7]^2 with displacements up to 0.1, alpha = 1.
GradientProblem make_gradient_problem(std::uint64_t seed, int height, int width, std::size_t k);

/// Analytic VJP vs central differences on every point and displacement
/// coordinate and a random subset of image entries. Fit errors propagate;
/// gradient mismatches are reported.
GradientReport check_gradients(const GradientProblem& problem, const GradientCheckOptions& options = {});
GradientReport check_gradients(std::uint64_t seed, int height, int width, std::size_t k,
                               const GradientCheckOptions& options = {});

}  // namespace warpkit
