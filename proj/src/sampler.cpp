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

#include "warpkit/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "warpkit/error.hpp"

namespace warpkit {

namespace detail {

namespace {

void axis_tap(double u, int n, int& i0, int& i1, double& f, bool& inside) {
  const double p = ndc_to_pixel(u, n);
  const double hi = static_cast<double>(n - 1);
  inside = p >= 0.0 && p <= hi;
  const double c = std::clamp(p, 0.0, hi);
  i0 = std::min(static_cast<int>(std::floor(c)), std::max(n - 2, 0));
  i1 = std::min(i0 + 1, n - 1);
  f = c - i0;
}

}  // namespace

SampleTap make_tap(Vec2 ndc, int height, int width) {
  if (!std::isfinite(ndc.x) || !std::isfinite(ndc.y)) {
    throw DomainError("sampler: non-finite flow coordinate");
  }
  SampleTap t;
  axis_tap(ndc.x, width, t.x0, t.x1, t.fx, t.x_inside);
  axis_tap(ndc.y, height, t.y0, t.y1, t.fy, t.y_inside);
  return t;
}

}  // namespace detail

FlowField build_flow(const TpsParameters& params, int height, int width) {
  FlowField flow(height, width);
  for (int y = 0; y < height; ++y) {
    const double v = pixel_center_ndc(y, height);
    for (int x = 0; x < width; ++x) {
      flow.at(y, x) = evaluate(params, {pixel_center_ndc(x, width), v});
    }
  }
  return flow;
}

Image resample(const Image& image, const FlowField& flow) {
  const int channels = image.channels();
  Image out(flow.height(), flow.width(), channels);
  for (int y = 0; y < flow.height(); ++y) {
    for (int x = 0; x < flow.width(); ++x) {
      const detail::SampleTap t = detail::make_tap(flow.at(y, x), image.height(), image.width());
      const double w00 = (1.0 - t.fx) * (1.0 - t.fy);
      const double w01 = t.fx * (1.0 - t.fy);
      const double w10 = (1.0 - t.fx) * t.fy;
      const double w11 = t.fx * t.fy;
      for (int c = 0; c < channels; ++c) {
        out.at(y, x, c) = w00 * image.at(t.y0, t.x0, c) + w01 * image.at(t.y0, t.x1, c) +
                          w10 * image.at(t.y1, t.x0, c) + w11 * image.at(t.y1, t.x1, c);
      }
    }
  }
  return out;
}

Image bilinear_sample(const Image& image, const FlowField& flow) {
  if (flow.height() != image.height() || flow.width() != image.width()) {
    throw ShapeError("bilinear_sample: flow is " + std::to_string(flow.height()) + "x" +
                     std::to_string(flow.width()) + " but image is " + std::to_string(image.height()) +
                     "x" + std::to_string(image.width()));
  }
  return resample(image, flow);
}

Image detail::tps_warp(const Image& image, const ControlPointSet& control, double alpha,
                       double lambda, std::size_t max_points) {
  const ControlPointSet scaled = control.scaled(alpha);
  if (scaled.is_identity()) {
    // Still validate so identity and non-identity inputs fail alike.
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
      throw ParameterError("tps: regularization must be a finite non-negative value");
    }
    validate_destinations(scaled.destinations(), max_points);
    return image;
  }
  const TpsParameters params = fit(scaled, lambda, max_points);
  return bilinear_sample(image, build_flow(params, image.height(), image.width()));
}

Image warp_image(const Image& image, const ControlPointSet& control, double alpha, double lambda) {
  return detail::tps_warp(image, control, alpha, lambda, kMaxControlPoints);
}

}  // namespace warpkit
