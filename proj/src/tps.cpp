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

#include "warpkit/tps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "warpkit/error.hpp"

namespace warpkit {

namespace {

constexpr double kMinRcond = 1e-14;

bool finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

}  // namespace

ControlPointSet::ControlPointSet(std::vector<Vec2> points, std::vector<Vec2> displacements)
    : points_(std::move(points)), displacements_(std::move(displacements)) {
  if (points_.size() != displacements_.size()) {
    throw ShapeError("control points: " + std::to_string(points_.size()) + " points but " +
                     std::to_string(displacements_.size()) + " displacements");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!finite(points_[i]) || !finite(displacements_[i])) {
      throw DomainError("control points: non-finite coordinate at index " + std::to_string(i));
    }
  }
}

std::vector<Vec2> ControlPointSet::destinations() const {
  std::vector<Vec2> out(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) out[i] = destination(i);
  return out;
}

ControlPointSet ControlPointSet::scaled(double alpha) const {
  std::vector<Vec2> d(displacements_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = alpha * displacements_[i];
  return ControlPointSet(points_, std::move(d));
}

bool ControlPointSet::is_identity() const noexcept {
  for (const Vec2& d : displacements_) {
    if (d.x != 0.0 || d.y != 0.0) return false;
  }
  return true;
}

double kernel(double r) {
  if (!(r >= 0.0)) {
    throw DomainError("kernel: radius must be non-negative, got " + std::to_string(r));
  }
  if (r == 0.0) return 0.0;
  return r * r * std::log(r);
}

double kernel_gradient_factor(double r) { return 2.0 * std::log(r) + 1.0; }

void validate_destinations(const std::vector<Vec2>& dst, std::size_t max_points) {
  const std::size_t k = dst.size();
  if (k < 3) {
    throw ParameterError("tps: at least 3 control points required, got " + std::to_string(k));
  }
  if (k > max_points) {
    throw ParameterError("tps: at most " + std::to_string(max_points) +
                         " control points supported, got " + std::to_string(k));
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (!finite(dst[i])) throw DomainError("tps: non-finite destination point");
    for (std::size_t j = i + 1; j < k; ++j) {
      const double d = norm(dst[i] - dst[j]);
      if (d < kDuplicateThreshold) {
        std::ostringstream msg;
        msg << "tps: destination points " << i << " and " << j << " are " << d
            << " apart (threshold " << kDuplicateThreshold << ")";
        throw DuplicatePointError(msg.str());
      }
    }
  }

  // Collinear destinations leave the affine block rank deficient.
  Vec2 mean;
  for (const Vec2& p : dst) mean += p;
  mean = (1.0 / static_cast<double>(k)) * mean;
  double sxx = 0, sxy = 0, syy = 0;
  for (const Vec2& p : dst) {
    const Vec2 c = p - mean;
    sxx += c.x * c.x;
    sxy += c.x * c.y;
    syy += c.y * c.y;
  }
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double hi = 0.5 * tr + disc;
  const double lo = std::max(0.0, 0.5 * tr - disc);
  if (hi <= 0.0 || lo <= 1e-20 * hi) {
    std::ostringstream msg;
    msg << "tps: destination points are collinear (scatter eigenvalue ratio " << (hi > 0 ? lo / hi : 0.0)
        << ")";
    throw NumericalError(msg.str());
  }
}

TpsSystem::TpsSystem(const std::vector<Vec2>& centers, double lambda, std::size_t max_points)
    : centers_(centers), lambda_(lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("tps: regularization must be a finite non-negative value");
  }
  validate_destinations(centers_, max_points);
  const auto k = static_cast<Eigen::Index>(centers_.size());
  matrix_ = Eigen::MatrixXd::Zero(k + 3, k + 3);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double phi = kernel(norm(centers_[i] - centers_[j]));
      matrix_(i, j) = phi;
      matrix_(j, i) = phi;
    }
    matrix_(i, i) = lambda_;
    matrix_(i, k) = 1.0;
    matrix_(i, k + 1) = centers_[i].x;
    matrix_(i, k + 2) = centers_[i].y;
    matrix_(k, i) = 1.0;
    matrix_(k + 1, i) = centers_[i].x;
    matrix_(k + 2, i) = centers_[i].y;
  }
  lu_.compute(matrix_);
  rcond_ = lu_.rcond();
  if (!(rcond_ >= kMinRcond)) {
    std::ostringstream msg;
    msg << "tps: singular system (condition estimate " << (rcond_ > 0 ? 1.0 / rcond_ : INFINITY)
        << ", lambda " << lambda_ << ")";
    throw NumericalError(msg.str());
  }
}

Eigen::MatrixX2d TpsSystem::solve(const Eigen::MatrixX2d& rhs) const {
  Eigen::MatrixX2d x = lu_.solve(rhs);
  // One step of iterative refinement.
  x += lu_.solve(rhs - matrix_ * x);
  return x;
}

Eigen::MatrixX2d TpsSystem::solve_transposed(const Eigen::MatrixX2d& rhs) const {
  // The augmented matrix is assembled exactly symmetric.
  return solve(rhs);
}

TpsParameters unpack_solution(const Eigen::MatrixX2d& x, const std::vector<Vec2>& centers,
                              double lambda) {
  const auto k = static_cast<Eigen::Index>(centers.size());
  TpsParameters params;
  params.w.resize(centers.size());
  for (Eigen::Index i = 0; i < k; ++i) params.w[i] = {x(i, 0), x(i, 1)};
  params.b = {x(k, 0), x(k, 1)};
  params.v = {{{x(k + 1, 0), x(k + 1, 1)}, {x(k + 2, 0), x(k + 2, 1)}}};
  params.centers = centers;
  params.regularization = lambda;
  return params;
}

TpsParameters fit(const ControlPointSet& control, double lambda, std::size_t max_points) {
  const std::vector<Vec2> dst = control.destinations();
  const TpsSystem system(dst, lambda, max_points);
  const auto k = static_cast<Eigen::Index>(dst.size());
  Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(k + 3, 2);
  for (Eigen::Index i = 0; i < k; ++i) {
    rhs(i, 0) = control.points()[i].x;
    rhs(i, 1) = control.points()[i].y;
  }
  return unpack_solution(system.solve(rhs), dst, lambda);
}

Vec2 evaluate(const TpsParameters& params, Vec2 q) {
  if (!finite(q)) throw DomainError("tps: non-finite query point");
  Vec2 out{params.v[0][0] * q.x + params.v[1][0] * q.y + params.b.x,
           params.v[0][1] * q.x + params.v[1][1] * q.y + params.b.y};
  for (std::size_t i = 0; i < params.centers.size(); ++i) {
    const double r = norm(q - params.centers[i]);
    if (r == 0.0) continue;
    const double phi = r * r * std::log(r);
    out.x += params.w[i].x * phi;
    out.y += params.w[i].y * phi;
  }
  return out;
}

}  // namespace warpkit
