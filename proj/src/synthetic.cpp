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

#include "warpkit/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "warpkit/error.hpp"

namespace warpkit {

Image gaussian_blur(const Image& image, double sigma) {
  if (!(sigma > 0.0)) return image;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    total += taps[i + radius];
  }
  for (double& t : taps) t /= total;

  const int h = image.height(), w = image.width(), ch = image.channels();
  Image tmp(h, w, ch), out(h, w, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          acc += taps[i + radius] * image.at(y, std::clamp(x + i, 0, w - 1), c);
        }
        tmp.at(y, x, c) = acc;
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          acc += taps[i + radius] * tmp.at(std::clamp(y + i, 0, h - 1), x, c);
        }
        out.at(y, x, c) = acc;
      }
    }
  }
  return out;
}

Image smooth_noise_image(Rng& rng, int height, int width, int channels, double sigma) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Image noise(height, width, channels);
  for (double& v : noise.data()) v = unit(rng);
  Image out = gaussian_blur(noise, sigma);
  const auto [lo, hi] = std::minmax_element(out.data().begin(), out.data().end());
  const double min = *lo, span = *hi - *lo;
  if (span > 0.0) {
    for (double& v : out.data()) v = (v - min) / span;
  }
  return out;
}

std::vector<Vec2> random_points(Rng& rng, std::size_t count, double extent, double min_separation) {
  std::uniform_real_distribution<double> coord(-extent, extent);
  std::vector<Vec2> pts;
  pts.reserve(count);
  std::size_t attempts = 0;
  while (pts.size() < count) {
    if (++attempts > 100000 * (count + 1)) {
      throw ParameterError("random_points: cannot place " + std::to_string(count) +
                           " points with the requested separation");
    }
    const Vec2 c{coord(rng), coord(rng)};
    const bool ok = std::all_of(pts.begin(), pts.end(),
                                [&](Vec2 q) { return norm(c - q) >= min_separation; });
    if (ok) pts.push_back(c);
  }
  return pts;
}

ControlPointSet random_control_points(Rng& rng, std::size_t count, double extent, double magnitude) {
  const double separation = 0.5 * 2.0 * extent / std::sqrt(static_cast<double>(count));
  std::vector<Vec2> pts = random_points(rng, count, extent, separation);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vec2> disp(count);
  double peak = 0.0;
  for (Vec2& d : disp) {
    d = {unit(rng), unit(rng)};
    peak = std::max({peak, std::abs(d.x), std::abs(d.y)});
  }
  const double s = peak > 0.0 ? magnitude / peak : 0.0;
  for (Vec2& d : disp) d = s * d;
  return ControlPointSet(std::move(pts), std::move(disp));
}

std::vector<Vec2> grid_points(std::size_t count, double extent) {
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(count))));
  std::vector<Vec2> pts;
  pts.reserve(count);
  for (std::size_t j = 0; j < side && pts.size() < count; ++j) {
    for (std::size_t i = 0; i < side && pts.size() < count; ++i) {
      const double u = side == 1 ? 0.0 : -extent + 2.0 * extent * i / (side - 1);
      const double v = side == 1 ? 0.0 : -extent + 2.0 * extent * j / (side - 1);
      pts.push_back({u, v});
    }
  }
  return pts;
}

}  // namespace warpkit
