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

#include <array>
#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "warpkit/image.hpp"

namespace warpkit {

/// Five facial landmarks in pixel coordinates (x right, y down, pixel
/// centers at integers).
struct FiveLandmarks {
  Vec2 left_eye;
  Vec2 right_eye;
  Vec2 nose;
  Vec2 mouth_left;
  Vec2 mouth_right;

  std::array<Vec2, 5> as_array() const { return {left_eye, right_eye, nose, mouth_left, mouth_right}; }
  static FiveLandmarks from_array(const std::array<Vec2, 5>& a) { return {a[0], a[1], a[2], a[3], a[4]}; }

  /// Throws DomainError if non-finite or the eyes are within one pixel.
  void validate() const;
};

/// Eye center as the mean of its two corners.
Vec2 eye_center(Vec2 corner_a, Vec2 corner_b);

/// T(x) = scale * R(rotation) * x + translation.
struct SimilarityTransform {
  double scale = 1.0;
  double rotation = 0.0;  // radians, counter-clockwise in x-right/y-up terms
  Vec2 translation;

  Vec2 apply(Vec2 x) const;
  SimilarityTransform inverse() const;
};

/// Least-squares similarity mapping `source` landmarks onto `templ`
/// (Procrustes with scale, closed form).
SimilarityTransform estimate_similarity(const FiveLandmarks& source, const FiveLandmarks& templ);

/// Default template in unit coordinates (fractions of the output side).
FiveLandmarks default_unit_template();

/// Template for an output of `out_size` pixels. Reads WARPKIT_TEMPLATE
/// (a landmarks file in unit coordinates) when set, else the default.
FiveLandmarks template_landmarks(int out_size);

inline constexpr int kDefaultAlignSize = 256;

/// Resamples `image` so its landmarks land on the template of an
/// out_size x out_size output.
Image align_face(const Image& image, const FiveLandmarks& landmarks, int out_size = kDefaultAlignSize);
Image align_face(const Image& image, const FiveLandmarks& landmarks, const FiveLandmarks& templ, int out_size);

/// Landmarks file: {"left_eye":[x,y], "right_eye":[x,y], "nose":[x,y],
/// "mouth_left":[x,y], "mouth_right":[x,y]}. Either eye may instead be
/// given as "left_eye_corners"/"right_eye_corners": [[x,y],[x,y]], which
/// are averaged. Unknown keys are rejected.
FiveLandmarks landmarks_from_json(const nlohmann::json& doc);
nlohmann::json landmarks_to_json(const FiveLandmarks& lm);
FiveLandmarks read_landmarks(const std::filesystem::path& path);

}  // namespace warpkit
