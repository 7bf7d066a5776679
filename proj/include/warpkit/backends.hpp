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

#include <array>
#include <vector>

#include "warpkit/image.hpp"
#include "warpkit/tps.hpp"

namespace warpkit {

/// Homography in NDC mapping source to destination, stored as its first
/// eight entries in row-major order; the bottom-right entry is fixed at 1.
class ProjectiveParams {
 public:
  ProjectiveParams();  // identity
  explicit ProjectiveParams(const std::array<double, 8>& h);

  static ProjectiveParams translation(Vec2 t);

  const std::array<double, 8>& values() const noexcept { return h_; }
  Eigen::Matrix3d matrix() const;
  bool is_identity() const noexcept;

  /// Maps `q` through the homography (forward direction).
  Vec2 apply(Vec2 q) const;

 private:
  std::array<double, 8> h_;
};

/// Coarse grid of NDC source offsets (flow minus identity). Node (i, j)
/// sits at the pixel-center NDC of a grid_h x grid_w lattice.
class CoarseDeformationGrid {
 public:
  CoarseDeformationGrid(int grid_h, int grid_w);  // zero offsets
  CoarseDeformationGrid(int grid_h, int grid_w, std::vector<Vec2> offsets);

  int grid_h() const noexcept { return grid_h_; }
  int grid_w() const noexcept { return grid_w_; }
  Vec2& at(int j, int i) { return offsets_[static_cast<std::size_t>(j) * grid_w_ + i]; }
  Vec2 at(int j, int i) const { return offsets_[static_cast<std::size_t>(j) * grid_w_ + i]; }
  const std::vector<Vec2>& offsets() const noexcept { return offsets_; }
  bool is_zero() const noexcept;

 private:
  int grid_h_;
  int grid_w_;
  std::vector<Vec2> offsets_;
};

inline constexpr int kDefaultDenseGrid = 16;

/// Samples through the inverse homography. Identity returns an exact copy.
Image projective_warp(const Image& image, const ProjectiveParams& params);

/// Flow used by projective_warp.
FlowField projective_flow(const ProjectiveParams& params, int height, int width);

/// Bilinearly upsampled offsets added to the identity grid.
FlowField dense_flow(const CoarseDeformationGrid& grid, int height, int width);

/// Dense deformation warp. A zero grid returns an exact copy.
Image dense_warp(const Image& image, const CoarseDeformationGrid& grid);

/// Samples the offsets f(q) - q of a spline at the grid nodes.
CoarseDeformationGrid sample_offsets(const TpsParameters& params, int grid_h, int grid_w);

/// Spline warp with fixed caller-supplied anchors; only the displacements
/// vary.
Image landmark_warp(const Image& image, const std::vector<Vec2>& anchors,
                    const std::vector<Vec2>& displacements, double alpha = 1.0,
                    double lambda = kDefaultTpsLambda);

}  // namespace warpkit
