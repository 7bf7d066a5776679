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

#include "warpkit/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "warpkit/error.hpp"

namespace warpkit {

namespace {

void check_dims(int height, int width, int channels) {
  if (height <= 0 || width <= 0 || channels <= 0) {
    throw ShapeError("image: dimensions must be positive, got " + std::to_string(height) + "x" +
                     std::to_string(width) + "x" + std::to_string(channels));
  }
}

}  // namespace

Image::Image(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
  check_dims(height, width, channels);
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

Image::Image(int height, int width, int channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  check_dims(height, width, channels);
  if (data_.size() != static_cast<std::size_t>(height) * width * channels) {
    throw ShapeError("image: expected " + std::to_string(static_cast<std::size_t>(height) * width * channels) +
                     " samples, got " + std::to_string(data_.size()));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw DomainError("image: non-finite sample");
  }
}

FlowField::FlowField(int height, int width) : height_(height), width_(width) {
  check_dims(height, width, 1);
  data_.resize(static_cast<std::size_t>(height) * width);
}

FlowField::FlowField(int height, int width, std::vector<Vec2> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width, 1);
  if (data_.size() != static_cast<std::size_t>(height) * width) {
    throw ShapeError("flow: expected " + std::to_string(static_cast<std::size_t>(height) * width) +
                     " entries, got " + std::to_string(data_.size()));
  }
}

FlowField FlowField::identity(int height, int width) {
  FlowField flow(height, width);
  for (int y = 0; y < height; ++y) {
    const double v = pixel_center_ndc(y, height);
    for (int x = 0; x < width; ++x) flow.at(y, x) = {pixel_center_ndc(x, width), v};
  }
  return flow;
}

double max_abs_diff(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ShapeError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ShapeError("psnr: shape mismatch");
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    sse += d * d;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(a.size()) / sse);
}

}  // namespace warpkit
