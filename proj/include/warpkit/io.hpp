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

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "warpkit/backends.hpp"
#include "warpkit/fitdemo.hpp"
#include "warpkit/image.hpp"
#include "warpkit/tps.hpp"
#include "warpkit/warp_grad.hpp"

namespace warpkit {

// PNG: 8-bit grayscale or RGB. Reading maps byte v to v / 255; writing
// rounds v * 255 half away from zero and clamps to [0, 255].
Image read_png(const std::filesystem::path& path);
void write_png(const Image& image, const std::filesystem::path& path);
std::uint8_t quantize(double value);

// Control points:
//   {"version":1, "coord_space":"ndc", "k":N,
//    "points":[[u,v],...], "displacements":[[du,dv],...]}
// Unknown keys, a different coord_space, or count mismatches are errors.
ControlPointSet control_points_from_json(const nlohmann::json& doc);
nlohmann::json control_points_to_json(const ControlPointSet& control);
ControlPointSet read_control_points(const std::filesystem::path& path);
void write_control_points(const ControlPointSet& control, const std::filesystem::path& path);

// Projective parameters: {"version":1, "homography":[h0..h7]}.
ProjectiveParams projective_from_json(const nlohmann::json& doc);
// Dense grid: {"version":1, "grid_h":G, "grid_w":G, "offsets":[[du,dv],...]}
// with G*G row-major entries.
CoarseDeformationGrid dense_grid_from_json(const nlohmann::json& doc);

// WFLD: "WFLD", u32 version = 1, u32 H, u32 W, then H*W (u, v) float32
// pairs, all little-endian, row-major from the top-left.
void write_wfld(const FlowField& flow, std::ostream& out);
FlowField read_wfld(std::istream& in);
void write_wfld(const FlowField& flow, const std::filesystem::path& path);
FlowField read_wfld(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

nlohmann::json to_json(const FitReport& report);
nlohmann::json to_json(const GradientReport& report);

}  // namespace warpkit
