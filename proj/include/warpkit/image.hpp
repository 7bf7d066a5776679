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

#include <cstddef>
#include <vector>

#include "warpkit/geometry.hpp"

namespace warpkit {

/// H x W x C samples, row-major with interleaved channels, top-left origin.
/// Nominal range is [0, 1]; nothing clamps it.
class Image {
 public:
  Image() = default;
  Image(int height, int width, int channels, double fill = 0.0);
  Image(int height, int width, int channels, std::vector<double> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int y, int x, int c) { return data_[index(y, x, c)]; }
  double at(int y, int x, int c) const { return data_[index(y, x, c)]; }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool same_shape(const Image& o) const noexcept {
    return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int y, int x, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Per destination pixel, the NDC source coordinate it samples from.
class FlowField {
 public:
  FlowField() = default;
  FlowField(int height, int width);
  FlowField(int height, int width, std::vector<Vec2> data);

  /// Pixel-center NDC coordinates, i.e. the flow of the identity warp.
  static FlowField identity(int height, int width);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

  Vec2& at(int y, int x) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  Vec2 at(int y, int x) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  std::vector<Vec2>& data() noexcept { return data_; }
  const std::vector<Vec2>& data() const noexcept { return data_; }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<Vec2> data_;
};

/// Max absolute per-sample difference; shapes must match.
double max_abs_diff(const Image& a, const Image& b);

/// Peak signal-to-noise ratio in dB for [0, 1] images; +inf when equal.
double psnr(const Image& a, const Image& b);

}  // namespace warpkit
