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
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "warpkit/geometry.hpp"

namespace warpkit {

inline constexpr std::size_t kMaxControlPoints = 64;
inline constexpr std::size_t kDefaultControlPoints = 16;
/// Landmark anchors (e.g. a 68-point detector layout) may exceed the
/// control-point cap.
inline constexpr std::size_t kMaxLandmarks = 128;
inline constexpr double kDuplicateThreshold = 1e-8;
inline constexpr double kDefaultTpsLambda = 1e-6;

/// Source control points p and their displacements; destinations are
/// p + displacement. Construction validates shapes and finiteness only;
/// spacing of the destinations is checked when fitting.
class ControlPointSet {
 public:
  ControlPointSet() = default;
  ControlPointSet(std::vector<Vec2> points, std::vector<Vec2> displacements);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Vec2>& points() const noexcept { return points_; }
  const std::vector<Vec2>& displacements() const noexcept { return displacements_; }

  Vec2 destination(std::size_t i) const { return points_[i] + displacements_[i]; }
  std::vector<Vec2> destinations() const;

  /// Same points with every displacement multiplied by `alpha`.
  ControlPointSet scaled(double alpha) const;

  /// True when every displacement is exactly zero.
  bool is_identity() const noexcept;

 private:
  std::vector<Vec2> points_;
  std::vector<Vec2> displacements_;
};

/// Fitted spline: f(q) = sum_i w_i phi(|q - c_i|) + v^T q + b.
struct TpsParameters {
  std::vector<Vec2> w;
  std::array<std::array<double, 2>, 2> v{{{1.0, 0.0}, {0.0, 1.0}}};  // v[row][col]
  Vec2 b;
  std::vector<Vec2> centers;
  double regularization = 0.0;
};

/// phi(r) = r^2 ln r with phi(0) = 0. Throws DomainError for r < 0 or NaN.
double kernel(double r);

/// phi'(r) / r = 2 ln r + 1, the radial factor of the kernel gradient.
/// The gradient of phi(|x|) is x * kernel_gradient_factor(|x|), which tends
/// to zero at the origin; callers must special-case r == 0.
double kernel_gradient_factor(double r);

/// The augmented (k+3)x(k+3) system [[K + lambda I, P], [P^T, 0]] with
/// P rows (1, x, y), factorized once and reusable for the adjoint solve.
class TpsSystem {
 public:
  TpsSystem(const std::vector<Vec2>& centers, double lambda,
            std::size_t max_points = kMaxControlPoints);

  std::size_t size() const noexcept { return centers_.size(); }
  const std::vector<Vec2>& centers() const noexcept { return centers_; }
  double lambda() const noexcept { return lambda_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  /// Reciprocal condition estimate of the factorized matrix.
  double rcond() const noexcept { return rcond_; }

  /// Solves A X = rhs for a (k+3)x2 right-hand side.
  Eigen::MatrixX2d solve(const Eigen::MatrixX2d& rhs) const;
  /// Solves A^T Y = rhs. A is symmetric, kept separate for clarity at
  /// call sites that differentiate through the solve.
  Eigen::MatrixX2d solve_transposed(const Eigen::MatrixX2d& rhs) const;

 private:
  std::vector<Vec2> centers_;
  double lambda_;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rcond_ = 0.0;
};

/// Checks the destination points for the count limits, duplicates and
/// collinearity, throwing the corresponding error.
void validate_destinations(const std::vector<Vec2>& destinations,
                           std::size_t max_points = kMaxControlPoints);

/// Closed-form fit mapping destinations p' back to sources p.
TpsParameters fit(const ControlPointSet& control, double lambda = kDefaultTpsLambda,
                  std::size_t max_points = kMaxControlPoints);

/// Packs a (k+3)x2 solution vector into parameters.
TpsParameters unpack_solution(const Eigen::MatrixX2d& solution,
                              const std::vector<Vec2>& centers, double lambda);

/// f(q); no clamping of the result.
Vec2 evaluate(const TpsParameters& params, Vec2 q);

}  // namespace warpkit
