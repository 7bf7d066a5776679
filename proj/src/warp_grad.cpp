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

#include "warpkit/warp_grad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "warpkit/error.hpp"
#include "warpkit/sampler.hpp"
#include "warpkit/synthetic.hpp"

namespace warpkit {

namespace {

Eigen::MatrixX2d source_rhs(const ControlPointSet& control) {
  const auto k = static_cast<Eigen::Index>(control.size());
  Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(k + 3, 2);
  for (Eigen::Index i = 0; i < k; ++i) {
    rhs(i, 0) = control.points()[i].x;
    rhs(i, 1) = control.points()[i].y;
  }
  return rhs;
}

// Gradient of phi(|x|) with respect to x.
Vec2 kernel_gradient(Vec2 x) {
  const double r = norm(x);
  if (r == 0.0) return {};
  return kernel_gradient_factor(r) * x;
}

}  // namespace

WarpTape::WarpTape(Image image, ControlPointSet control, double alpha, double lambda)
    : image_(std::move(image)),
      control_(std::move(control)),
      alpha_(alpha),
      identity_(control_.scaled(alpha).is_identity()),
      system_(control_.scaled(alpha).destinations(), lambda) {
  const ControlPointSet scaled = control_.scaled(alpha_);
  solution_ = system_.solve(source_rhs(scaled));
  params_ = unpack_solution(solution_, system_.centers(), lambda);
  flow_ = build_flow(params_, image_.height(), image_.width());
  output_ = identity_ ? image_ : bilinear_sample(image_, flow_);
}

WarpCotangents WarpTape::vjp(const Image& upstream) const {
  if (!upstream.same_shape(output_)) throw ShapeError("warp_vjp: upstream shape mismatch");
  for (double u : upstream.data()) {
    if (!std::isfinite(u)) throw DomainError("warp_vjp: non-finite upstream value");
  }

  const int h = image_.height(), w = image_.width(), channels = image_.channels();
  const std::size_t k = control_.size();
  const auto kk = static_cast<Eigen::Index>(k);

  WarpCotangents out;
  out.d_image = identity_ ? upstream : Image(h, w, channels);
  out.d_points.assign(k, {});
  out.d_displacements.assign(k, {});

  // Sampling adjoint: image cotangent and per-pixel flow cotangent.
  std::vector<Vec2> d_flow(static_cast<std::size_t>(h) * w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const detail::SampleTap t = detail::make_tap(flow_.at(y, x), h, w);
      double gx = 0.0, gy = 0.0;
      for (int c = 0; c < channels; ++c) {
        const double u = upstream.at(y, x, c);
        if (u == 0.0) continue;
        const double i00 = image_.at(t.y0, t.x0, c), i01 = image_.at(t.y0, t.x1, c);
        const double i10 = image_.at(t.y1, t.x0, c), i11 = image_.at(t.y1, t.x1, c);
        gx += u * ((1.0 - t.fy) * (i01 - i00) + t.fy * (i11 - i10));
        gy += u * ((1.0 - t.fx) * (i10 - i00) + t.fx * (i11 - i01));
        if (!identity_) {
          out.d_image.at(t.y0, t.x0, c) += u * (1.0 - t.fx) * (1.0 - t.fy);
          out.d_image.at(t.y0, t.x1, c) += u * t.fx * (1.0 - t.fy);
          out.d_image.at(t.y1, t.x0, c) += u * (1.0 - t.fx) * t.fy;
          out.d_image.at(t.y1, t.x1, c) += u * t.fx * t.fy;
        }
      }
      d_flow[static_cast<std::size_t>(y) * w + x] = {t.x_inside ? gx * 0.5 * w : 0.0,
                                                      t.y_inside ? gy * 0.5 * h : 0.0};
    }
  }

  // Flow adjoint: cotangent of the packed solution and of the kernel
  // centers through the evaluation.
  const std::vector<Vec2>& centers = system_.centers();
  Eigen::MatrixX2d d_solution = Eigen::MatrixX2d::Zero(kk + 3, 2);
  std::vector<Vec2> d_centers(k);
  for (int y = 0; y < h; ++y) {
    const double qy = pixel_center_ndc(y, h);
    for (int x = 0; x < w; ++x) {
      const Vec2 g = d_flow[static_cast<std::size_t>(y) * w + x];
      if (g.x == 0.0 && g.y == 0.0) continue;
      const Vec2 q{pixel_center_ndc(x, w), qy};
      d_solution(kk, 0) += g.x;
      d_solution(kk, 1) += g.y;
      d_solution(kk + 1, 0) += q.x * g.x;
      d_solution(kk + 1, 1) += q.x * g.y;
      d_solution(kk + 2, 0) += q.y * g.x;
      d_solution(kk + 2, 1) += q.y * g.y;
      for (std::size_t i = 0; i < k; ++i) {
        const Vec2 diff = q - centers[i];
        const double r = norm(diff);
        if (r == 0.0) continue;
        const double phi = r * r * std::log(r);
        d_solution(static_cast<Eigen::Index>(i), 0) += phi * g.x;
        d_solution(static_cast<Eigen::Index>(i), 1) += phi * g.y;
        const double s = dot(g, params_.w[i]) * kernel_gradient_factor(r);
        d_centers[i] += (-s) * diff;
      }
    }
  }

  // Solve adjoint: d_rhs = A^-T d_solution, d_A = -d_rhs * solution^T.
  const Eigen::MatrixX2d d_rhs = system_.solve_transposed(d_solution);
  const Eigen::MatrixXd d_matrix = -d_rhs * solution_.transpose();
  for (std::size_t m = 0; m < k; ++m) {
    const auto mm = static_cast<Eigen::Index>(m);
    for (std::size_t j = 0; j < k; ++j) {
      if (j == m) continue;
      const auto jj = static_cast<Eigen::Index>(j);
      const double s = d_matrix(mm, jj) + d_matrix(jj, mm);
      d_centers[m] += s * kernel_gradient(centers[m] - centers[j]);
    }
    d_centers[m].x += d_matrix(mm, kk + 1) + d_matrix(kk + 1, mm);
    d_centers[m].y += d_matrix(mm, kk + 2) + d_matrix(kk + 2, mm);
  }

  // Destinations are p + alpha * displacement; the rhs holds p directly.
  for (std::size_t i = 0; i < k; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out.d_points[i] = Vec2{d_rhs(ii, 0), d_rhs(ii, 1)} + d_centers[i];
    out.d_displacements[i] = alpha_ * d_centers[i];
  }
  return out;
}

WarpCotangents warp_vjp(const Image& image, const ControlPointSet& control, double alpha,
                        double lambda, const Image& upstream) {
  return WarpTape(image, control, alpha, lambda).vjp(upstream);
}

GradientProblem make_gradient_problem(std::uint64_t seed, int height, int width, std::size_t k) {
  if (height < 4 || width < 4) throw ParameterError("check_gradients: H and W must be at least 4");
  if (k < 3 || k > kMaxControlPoints) {
    throw ParameterError("check_gradients: k must lie in [3, 64], got " + std::to_string(k));
  }
  Rng rng(seed);
  GradientProblem problem;
  problem.image = smooth_noise_image(rng, height, width, 2, 1.5);
  problem.control = random_control_points(rng, k, 0.7, 0.1);
  problem.alpha = 1.0;
  problem.lambda = kDefaultTpsLambda;
  problem.seed = seed;
  return problem;
}

namespace {

struct Evaluation {
  double value = 0.0;
  FlowField flow;
};

double inner(const Image& a, const Image& b) {
  return std::inner_product(a.data().begin(), a.data().end(), b.data().begin(), 0.0);
}

Evaluation objective(const Image& image, const ControlPointSet& control, double alpha, double lambda,
                     const Image& upstream) {
  const WarpTape tape(image, control, alpha, lambda);
  return {inner(tape.output(), upstream), tape.flow()};
}

double distance_to_cell_boundary(double ndc, int n) {
  const double p = ndc_to_pixel(ndc, n);
  return std::abs(p - std::round(p));
}

bool same_cells(const FlowField& a, const FlowField& b, const std::vector<bool>& active, int h, int w) {
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    if (!active[i]) continue;
    const detail::SampleTap ta = detail::make_tap(a.data()[i], h, w);
    const detail::SampleTap tb = detail::make_tap(b.data()[i], h, w);
    if (ta.x0 != tb.x0 || ta.y0 != tb.y0 || ta.x_inside != tb.x_inside || ta.y_inside != tb.y_inside) {
      return false;
    }
  }
  return true;
}

}  // namespace

GradientReport check_gradients(const GradientProblem& problem, const GradientCheckOptions& options) {
  const Image& image = problem.image;
  const int h = image.height(), w = image.width(), channels = image.channels();
  const std::size_t k = problem.control.size();

  GradientReport report;
  report.seed = problem.seed;
  report.height = h;
  report.width = w;
  report.k = k;

  // Fails here (before any differencing) on invalid control points.
  const WarpTape base(image, problem.control, problem.alpha, problem.lambda);

  Rng rng(problem.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Image upstream(h, w, channels);
  for (double& u : upstream.data()) u = gauss(rng);

  std::vector<bool> active(static_cast<std::size_t>(h) * w, true);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Vec2 s = base.flow().at(y, x);
      if (distance_to_cell_boundary(s.x, w) < options.boundary_margin ||
          distance_to_cell_boundary(s.y, h) < options.boundary_margin) {
        active[static_cast<std::size_t>(y) * w + x] = false;
        ++report.masked_pixels;
        for (int c = 0; c < channels; ++c) upstream.at(y, x, c) = 0.0;
      }
    }
  }

  const WarpCotangents analytic = base.vjp(upstream);
  bool all_ok = true;
  auto record = [&](double a, double f) {
    ++report.checked;
    const double diff = std::abs(a - f);
    report.max_abs_error = std::max(report.max_abs_error, diff);
    if (diff <= options.abs_floor) return;
    const double rel = diff / std::max(std::abs(a), std::abs(f));
    report.max_rel_error = std::max(report.max_rel_error, rel);
    if (!(rel < options.rel_tolerance)) all_ok = false;
  };

  const std::vector<Vec2>& pts = problem.control.points();
  const std::vector<Vec2>& disp = problem.control.displacements();
  for (int which = 0; which < 2; ++which) {
    for (std::size_t i = 0; i < k; ++i) {
      for (int axis = 0; axis < 2; ++axis) {
        auto perturbed = [&](double delta) {
          std::vector<Vec2> p = pts, d = disp;
          Vec2& target = which == 0 ? p[i] : d[i];
          (axis == 0 ? target.x : target.y) += delta;
          return objective(image, ControlPointSet(std::move(p), std::move(d)), problem.alpha,
                           problem.lambda, upstream);
        };
        const Evaluation plus = perturbed(options.step);
        const Evaluation minus = perturbed(-options.step);
        if (!same_cells(plus.flow, minus.flow, active, h, w)) {
          ++report.skipped;
          continue;
        }
        const double fd = (plus.value - minus.value) / (2.0 * options.step);
        const Vec2 g = which == 0 ? analytic.d_points[i] : analytic.d_displacements[i];
        record(axis == 0 ? g.x : g.y, fd);
      }
    }
  }
  const std::size_t param_coords = 4 * k;
  const bool enough_params = report.skipped * 2 <= param_coords;

  std::vector<std::size_t> entries(image.size());
  std::iota(entries.begin(), entries.end(), std::size_t{0});
  std::shuffle(entries.begin(), entries.end(), rng);
  entries.resize(std::min(entries.size(), options.image_entries));
  for (std::size_t e : entries) {
    Image plus = image, minus = image;
    plus.data()[e] += options.step;
    minus.data()[e] -= options.step;
    const double fd =
        (objective(plus, problem.control, problem.alpha, problem.lambda, upstream).value -
         objective(minus, problem.control, problem.alpha, problem.lambda, upstream).value) /
        (2.0 * options.step);
    record(analytic.d_image.data()[e], fd);
  }

  report.pass = all_ok && enough_params;
  return report;
}

GradientReport check_gradients(std::uint64_t seed, int height, int width, std::size_t k,
                               const GradientCheckOptions& options) {
  return check_gradients(make_gradient_problem(seed, height, width, k), options);
}

}  // namespace warpkit
