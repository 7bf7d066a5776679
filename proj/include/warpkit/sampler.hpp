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

#include "warpkit/image.hpp"
#include "warpkit/tps.hpp"

namespace warpkit {

/// Evaluates the spline at every pixel center of an H x W grid.
FlowField build_flow(const TpsParameters& params, int height, int width);

/// Bilinear inverse-mapping resample with clamp-to-edge borders. The flow
/// must have the image's height and width.
Image bilinear_sample(const Image& image, const FlowField& flow);

/// As bilinear_sample, but the output takes the flow's dimensions, which
/// may differ from the image's. Flow coordinates are NDC of the input.
Image resample(const Image& image, const FlowField& flow);

/// Thin-plate-spline warp with displacements scaled by `alpha` before the
/// fit. A zero scaled displacement returns an exact copy.
Image warp_image(const Image& image, const ControlPointSet& control, double alpha = 1.0,
                 double lambda = kDefaultTpsLambda);

namespace detail {

/// warp_image with a configurable control-point cap.
Image tps_warp(const Image& image, const ControlPointSet& control, double alpha, double lambda,
               std::size_t max_points);

/// Bilinear footprint of one NDC source location.
struct SampleTap {
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  double fx = 0.0, fy = 0.0;
  /// False when the coordinate was clamped, so its derivative is zero.
  bool x_inside = true, y_inside = true;
};

/// Lower-cell convention: a location exactly on a cell boundary belongs to
/// the cell on its right/below, except at the last row/column.
SampleTap make_tap(Vec2 ndc, int height, int width);

}  // namespace detail

}  // namespace warpkit
