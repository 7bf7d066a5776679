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

#include "warpkit/backends.hpp"

#include <cmath>

#include "warpkit/error.hpp"
#include "warpkit/sampler.hpp"

namespace warpkit {

ProjectiveParams::ProjectiveParams() : h_{1, 0, 0, 0, 1, 0, 0, 0} {}

ProjectiveParams::ProjectiveParams(const std::array<double, 8>& h) : h_(h) {
  for (double v : h_) {
    if (!std::isfinite(v)) throw ParameterError("projective: non-finite parameter");
  }
  const double det = matrix().determinant();
  if (!(std::abs(det) > 1e-12)) {
    throw ParameterError("projective: matrix is not invertible (det " + std::to_string(det) + ")");
  }
}

ProjectiveParams ProjectiveParams::translation(Vec2 t) {
  return ProjectiveParams({1, 0, t.x, 0, 1, t.y, 0, 0});
}

Eigen::Matrix3d ProjectiveParams::matrix() const {
  Eigen::Matrix3d m;
  m << h_[0], h_[1], h_[2], h_[3], h_[4], h_[5], h_[6], h_[7], 1.0;
  return m;
}

bool ProjectiveParams::is_identity() const noexcept { return h_ == ProjectiveParams().h_; }

Vec2 ProjectiveParams::apply(Vec2 q) const {
  const double z = h_[6] * q.x + h_[7] * q.y + 1.0;
  return {(h_[0] * q.x + h_[1] * q.y + h_[2]) / z, (h_[3] * q.x + h_[4] * q.y + h_[5]) / z};
}

FlowField projective_flow(const ProjectiveParams& params, int height, int width) {
  const Eigen::Matrix3d inv = params.matrix().inverse();
  FlowField flow(height, width);
  for (int y = 0; y < height; ++y) {
    const double v = pixel_center_ndc(y, height);
    for (int x = 0; x < width; ++x) {
      const double u = pixel_center_ndc(x, width);
      const Eigen::Vector3d s = inv * Eigen::Vector3d(u, v, 1.0);
      const Vec2 src{s.x() / s.z(), s.y() / s.z()};
      if (!std::isfinite(src.x) || !std::isfinite(src.y)) {
        throw ParameterError("projective: pixel maps to the line at infinity");
      }
      flow.at(y, x) = src;
    }
  }
  return flow;
}

Image projective_warp(const Image& image, const ProjectiveParams& params) {
  if (params.is_identity()) return image;
  return bilinear_sample(image, projective_flow(params, image.height(), image.width()));
}

CoarseDeformationGrid::CoarseDeformationGrid(int grid_h, int grid_w)
    : CoarseDeformationGrid(grid_h, grid_w,
                            std::vector<Vec2>(static_cast<std::size_t>(std::max(grid_h, 0)) *
                                              std::max(grid_w, 0))) {}

CoarseDeformationGrid::CoarseDeformationGrid(int grid_h, int grid_w, std::vector<Vec2> offsets)
    : grid_h_(grid_h), grid_w_(grid_w), offsets_(std::move(offsets)) {
  if (grid_h < 2 || grid_w < 2) throw ShapeError("dense grid: both dimensions must be at least 2");
  if (offsets_.size() != static_cast<std::size_t>(grid_h) * grid_w) {
    throw ShapeError("dense grid: expected " + std::to_string(grid_h * grid_w) + " offsets, got " +
                     std::to_string(offsets_.size()));
  }
  for (Vec2 o : offsets_) {
    if (!std::isfinite(o.x) || !std::isfinite(o.y)) throw DomainError("dense grid: non-finite offset");
  }
}

bool CoarseDeformationGrid::is_zero() const noexcept {
  for (Vec2 o : offsets_) {
    if (o.x != 0.0 || o.y != 0.0) return false;
  }
  return true;
}

FlowField dense_flow(const CoarseDeformationGrid& grid, int height, int width) {
  // Treat the grid as a 2-channel image and resample it at the output's
  // pixel centers.
  std::vector<double> packed;
  packed.reserve(grid.offsets().size() * 2);
  for (Vec2 o : grid.offsets()) {
    packed.push_back(o.x);
    packed.push_back(o.y);
  }
  const Image coarse(grid.grid_h(), grid.grid_w(), 2, std::move(packed));
  FlowField flow = FlowField::identity(height, width);
  const Image fine = resample(coarse, flow);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) flow.at(y, x) += Vec2{fine.at(y, x, 0), fine.at(y, x, 1)};
  }
  return flow;
}

Image dense_warp(const Image& image, const CoarseDeformationGrid& grid) {
  if (grid.is_zero()) return image;
  return bilinear_sample(image, dense_flow(grid, image.height(), image.width()));
}

CoarseDeformationGrid sample_offsets(const TpsParameters& params, int grid_h, int grid_w) {
  CoarseDeformationGrid grid(grid_h, grid_w);
  for (int j = 0; j < grid_h; ++j) {
    for (int i = 0; i < grid_w; ++i) {
      const Vec2 q{pixel_center_ndc(i, grid_w), pixel_center_ndc(j, grid_h)};
      grid.at(j, i) = evaluate(params, q) - q;
    }
  }
  return grid;
}

Image landmark_warp(const Image& image, const std::vector<Vec2>& anchors,
                    const std::vector<Vec2>& displacements, double alpha, double lambda) {
  if (anchors.size() != displacements.size()) {
    throw ShapeError("landmark_warp: " + std::to_string(anchors.size()) + " anchors but " +
                     std::to_string(displacements.size()) + " displacements");
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      if (norm(anchors[i] - anchors[j]) < kDuplicateThreshold) {
        throw DuplicatePointError("landmark_warp: anchors " + std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide");
      }
    }
  }
  return detail::tps_warp(image, ControlPointSet(anchors, displacements), alpha, lambda, kMaxLandmarks);
}

}  // namespace warpkit
