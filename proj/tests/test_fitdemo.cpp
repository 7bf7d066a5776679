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

#include <doctest.h>

#include <cmath>

#include "warpkit/error.hpp"
#include "warpkit/fitdemo.hpp"
#include "warpkit/sampler.hpp"
#include "warpkit/synthetic.hpp"

using namespace warpkit;

namespace {

Image shifted(const Image& src, Vec2 t) {
  FlowField flow = FlowField::identity(src.height(), src.width());
  for (Vec2& v : flow.data()) v = v - t;
  return bilinear_sample(src, flow);
}

}  // namespace

TEST_CASE("fitting an image onto itself stays at zero displacement") {
  Rng rng(0);
  const Image src = smooth_noise_image(rng, 32, 32, 3, 2.0);
  FitConfig config;
  config.iterations = 50;
  const FitReport r = fit_warp(src, src, config);
  CHECK(r.best_loss < 1e-4);
  double peak = 0.0;
  for (Vec2 d : r.control.displacements()) peak = std::max({peak, std::abs(d.x), std::abs(d.y)});
  CHECK(peak < 0.02);
  CHECK(r.trajectory.size() == 50);
}

TEST_CASE("a constant shift is recovered in the central half of the frame") {
  Rng rng(3);
  const Image src = smooth_noise_image(rng, 64, 64, 3, 4.0);
  const Vec2 t{0.05, 0.0};
  const FitReport r = fit_warp(src, shifted(src, t), FitConfig{});
  const FlowField recovered = build_flow(fit(r.control, kDefaultTpsLambda), 64, 64);
  const FlowField grid = FlowField::identity(64, 64);
  double err = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < grid.data().size(); ++i) {
    const Vec2 q = grid.data()[i];
    if (std::abs(q.x) <= 0.5 && std::abs(q.y) <= 0.5) {
      err += norm(recovered.data()[i] - (q - t));
      ++n;
    }
  }
  CHECK(err / n < 0.005);
}

TEST_CASE("round trips") {
  SUBCASE("zero magnitude is exact") {
    FitConfig config;
    config.iterations = 20;
    const FitReport r = roundtrip(0, 32, 32, 16, 0.0, config);
    CHECK(std::isinf(r.psnr));
    CHECK(r.best_loss == 0.0);
  }
  SUBCASE("seed 0") { CHECK(roundtrip(0, 64, 64, 16, 0.1).psnr > 35.0); }
  SUBCASE("seed 7") { CHECK(roundtrip(7, 64, 64, 16, 0.1).psnr > 35.0); }
  SUBCASE("magnitude is limited") { CHECK_THROWS_AS(roundtrip(0, 32, 32, 16, 0.25), ParameterError); }
}

TEST_CASE("fit reports are deterministic and best-so-far is monotone") {
  FitConfig config;
  config.iterations = 40;
  const FitReport a = roundtrip(5, 32, 32, 9, 0.1, config);
  const FitReport b = roundtrip(5, 32, 32, 9, 0.1, config);
  CHECK(a.trajectory == b.trajectory);
  CHECK(a.control.points() == b.control.points());
  CHECK(a.control.displacements() == b.control.displacements());
  CHECK(a.psnr == b.psnr);

  const std::vector<double> best = best_so_far(a.trajectory);
  for (std::size_t i = 1; i < best.size(); ++i) CHECK(best[i] <= best[i - 1]);
  CHECK(best.back() == a.best_loss);
  CHECK(a.trajectory[static_cast<std::size_t>(a.best_iteration)] == a.best_loss);
}

TEST_CASE("divergence is reported with its trajectory") {
  Rng rng(1);
  const Image src = smooth_noise_image(rng, 32, 32, 1, 2.0);
  FitConfig config;
  config.step_size = 5.0;
  config.iterations = 400;
  try {
    (void)fit_warp(src, shifted(src, {0.002, 0.0}), config);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.trajectory().size() == 101);
    CHECK(e.trajectory().back() > 10 * e.trajectory().front());
  }
  // Steps large enough to throw the points far away degenerate the system.
  config.step_size = 500.0;
  CHECK_THROWS_AS((void)fit_warp(src, shifted(src, {0.002, 0.0}), config), DivergenceError);
}

TEST_CASE("fit configuration validation") {
  const Image img(8, 8, 1);
  FitConfig bad;
  bad.iterations = 0;
  CHECK_THROWS_AS(fit_warp(img, img, bad), ParameterError);
  bad = {};
  bad.beta1 = 1.0;
  CHECK_THROWS_AS(fit_warp(img, img, bad), ParameterError);
  bad = {};
  bad.k = 2;
  CHECK_THROWS_AS(fit_warp(img, img, bad), ParameterError);
  CHECK_THROWS_AS(fit_warp(img, Image(8, 9, 1), FitConfig{}), ShapeError);
}
