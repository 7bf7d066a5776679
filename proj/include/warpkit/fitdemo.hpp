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
#include <vector>

#include "warpkit/image.hpp"
#include "warpkit/tps.hpp"

namespace warpkit {

struct FitConfig {
  std::size_t k = kDefaultControlPoints;
  int iterations = 2000;
  double step_size = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double lambda = kDefaultTpsLambda;
  std::uint64_t seed = 0;

  void validate() const;
};

struct FitReport {
  ControlPointSet control;          // best iterate
  std::vector<double> trajectory;   // L1 loss of each iterate, one per iteration
  double best_loss = 0.0;
  int best_iteration = 0;
  double psnr = 0.0;                // dB of the best iterate's warp vs target; +inf if exact
};

/// Running minimum of a trajectory.
std::vector<double> best_so_far(const std::vector<double>& trajectory);

/// Recovers control points mapping `source` onto `target` by minimizing
/// the mean absolute difference of warp_image(source, C) and target with
/// bias-corrected adaptive moment updates on (p, dp). Points start on a
/// uniform lattice over [-0.8, 0.8]^2 with zero displacement. Throws
/// DivergenceError when the loss stays above 10x its initial value for
/// 100 consecutive iterations, or when an update leaves the control
/// points degenerate (coincident or collinear destinations).
FitReport fit_warp(const Image& source, const Image& target, const FitConfig& config = {});

/// Self-generated problem: seeded smooth 3-channel image, random control
/// points with max |dp| = magnitude, warped, then recovered by fit_warp.
FitReport roundtrip(std::uint64_t seed, int height, int width, std::size_t k, double magnitude,
                    FitConfig config = {});

}  // namespace warpkit
