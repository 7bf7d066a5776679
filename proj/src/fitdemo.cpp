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

#include "warpkit/fitdemo.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "warpkit/error.hpp"
#include "warpkit/losses.hpp"
#include "warpkit/sampler.hpp"
#include "warpkit/synthetic.hpp"
#include "warpkit/warp_grad.hpp"

namespace warpkit {

namespace {

constexpr double kInitExtent = 0.8;
constexpr double kDivergenceFactor = 10.0;
constexpr int kDivergencePatience = 100;

// Adam state over a flat parameter vector.
class AdamState {
 public:
  AdamState(std::size_t n, const FitConfig& config) : m_(n, 0.0), v_(n, 0.0), config_(config) {}

  void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
    ++t_;
    const double c1 = 1.0 - std::pow(config_.beta1, t_);
    const double c2 = 1.0 - std::pow(config_.beta2, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grad[i];
      v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grad[i] * grad[i];
      params[i] -= lr * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + 1e-12);
    }
  }

 private:
  std::vector<double> m_, v_;
  FitConfig config_;
  int t_ = 0;
};

std::vector<double> pack(const ControlPointSet& c) {
  std::vector<double> out;
  out.reserve(4 * c.size());
  for (Vec2 p : c.points()) out.insert(out.end(), {p.x, p.y});
  for (Vec2 d : c.displacements()) out.insert(out.end(), {d.x, d.y});
  return out;
}

ControlPointSet unpack(const std::vector<double>& flat, std::size_t k) {
  std::vector<Vec2> p(k), d(k);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = {flat[2 * i], flat[2 * i + 1]};
    d[i] = {flat[2 * k + 2 * i], flat[2 * k + 2 * i + 1]};
  }
  return ControlPointSet(std::move(p), std::move(d));
}

// Constant step for the first half, then linear decay towards zero.
double schedule(double base, int iteration, int iterations) {
  const int half = iterations / 2;
  if (iteration < half) return base;
  return base * static_cast<double>(iterations - iteration) / static_cast<double>(iterations - half);
}

}  // namespace

void FitConfig::validate() const {
  if (k < 3 || k > kMaxControlPoints) throw ParameterError("fit: k must lie in [3, 64]");
  if (iterations <= 0) throw ParameterError("fit: iterations must be positive");
  if (!(step_size > 0.0)) throw ParameterError("fit: step size must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ParameterError("fit: moment coefficients must lie in [0, 1)");
  }
  if (!(lambda >= 0.0)) throw ParameterError("fit: regularization must be non-negative");
}

std::vector<double> best_so_far(const std::vector<double>& trajectory) {
  std::vector<double> out(trajectory.size());
  double best = INFINITY;
  for (std::size_t i = 0; i < trajectory.size(); ++i) out[i] = best = std::min(best, trajectory[i]);
  return out;
}

FitReport fit_warp(const Image& source, const Image& target, const FitConfig& config) {
  config.validate();
  if (!source.same_shape(target)) throw ShapeError("fit_warp: source and target shapes differ");

  const std::size_t k = config.k;
  ControlPointSet control(grid_points(k, kInitExtent), std::vector<Vec2>(k));
  std::vector<double> params = pack(control);
  AdamState adam(params.size(), config);
  const double inv_n = 1.0 / static_cast<double>(source.size());

  FitReport report;
  report.trajectory.reserve(static_cast<std::size_t>(config.iterations));
  report.best_loss = INFINITY;
  int above = 0;
  for (int it = 0; it < config.iterations; ++it) {
    control = unpack(params, k);
    std::optional<WarpTape> built;
    try {
      built.emplace(source, control, 1.0, config.lambda);
    } catch (const NumericalError& e) {
      if (it == 0) throw;
      throw DivergenceError("fit_warp: iteration " + std::to_string(it) + ": " + e.what(), report.trajectory);
    } catch (const DuplicatePointError& e) {
      if (it == 0) throw;
      throw DivergenceError("fit_warp: iteration " + std::to_string(it) + ": " + e.what(), report.trajectory);
    }
    const WarpTape& tape = *built;
    const Image& out = tape.output();
    Image upstream(out.height(), out.width(), out.channels());
    double loss = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double d = out.data()[i] - target.data()[i];
      loss += std::abs(d);
      upstream.data()[i] = d > 0.0 ? inv_n : (d < 0.0 ? -inv_n : 0.0);
    }
    loss *= inv_n;
    if (!std::isfinite(loss)) {
      report.trajectory.push_back(loss);
      throw DivergenceError("fit_warp: non-finite loss at iteration " + std::to_string(it), report.trajectory);
    }
    report.trajectory.push_back(loss);
    if (loss < report.best_loss) {
      report.best_loss = loss;
      report.best_iteration = it;
      report.control = control;
    }
    above = loss > kDivergenceFactor * report.trajectory.front() ? above + 1 : 0;
    if (above >= kDivergencePatience) {
      throw DivergenceError("fit_warp: loss above 10x its initial value for " +
                                std::to_string(kDivergencePatience) + " iterations",
                            report.trajectory);
    }

    const WarpCotangents grad = tape.vjp(upstream);
    std::vector<double> flat;
    flat.reserve(params.size());
    for (Vec2 g : grad.d_points) flat.insert(flat.end(), {g.x, g.y});
    for (Vec2 g : grad.d_displacements) flat.insert(flat.end(), {g.x, g.y});
    adam.step(params, flat, schedule(config.step_size, it, config.iterations));
  }

  report.psnr = psnr(warp_image(source, report.control, 1.0, config.lambda), target);
  return report;
}

FitReport roundtrip(std::uint64_t seed, int height, int width, std::size_t k, double magnitude,
                    FitConfig config) {
  if (!(magnitude >= 0.0 && magnitude <= 0.2)) {
    throw ParameterError("roundtrip: magnitude must lie in [0, 0.2]");
  }
  config.k = k;
  config.seed = seed;
  config.validate();
  Rng rng(seed);
  const Image source = smooth_noise_image(rng, height, width, 3, height / 16.0);
  const ControlPointSet truth = random_control_points(rng, k, 0.8, magnitude);
  const Image target = warp_image(source, truth, 1.0, config.lambda);
  return fit_warp(source, target, config);
}

}  // namespace warpkit
