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

#include "warpkit/align.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

#include "warpkit/error.hpp"
#include "warpkit/io.hpp"
#include "warpkit/sampler.hpp"

namespace warpkit {

using nlohmann::json;

void FiveLandmarks::validate() const {
  for (Vec2 p : as_array()) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("landmarks: non-finite coordinate");
  }
  if (!(norm(left_eye - right_eye) > 1.0)) throw DomainError("landmarks: eyes are within one pixel");
}

Vec2 eye_center(Vec2 a, Vec2 b) { return 0.5 * (a + b); }

Vec2 SimilarityTransform::apply(Vec2 x) const {
  const double c = std::cos(rotation), s = std::sin(rotation);
  return {scale * (c * x.x - s * x.y) + translation.x, scale * (s * x.x + c * x.y) + translation.y};
}

SimilarityTransform SimilarityTransform::inverse() const {
  SimilarityTransform inv;
  inv.scale = 1.0 / scale;
  inv.rotation = -rotation;
  inv.translation = {};
  const Vec2 t = inv.apply(translation);
  inv.translation = {-t.x, -t.y};
  return inv;
}

SimilarityTransform estimate_similarity(const FiveLandmarks& source, const FiveLandmarks& templ) {
  const auto src = source.as_array();
  const auto dst = templ.as_array();
  Vec2 ms, md;
  for (std::size_t i = 0; i < 5; ++i) {
    ms += src[i];
    md += dst[i];
  }
  ms = 0.2 * ms;
  md = 0.2 * md;
  double dot_sum = 0.0, cross_sum = 0.0, src_var = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const Vec2 a = src[i] - ms, b = dst[i] - md;
    dot_sum += dot(a, b);
    cross_sum += a.x * b.y - a.y * b.x;
    src_var += dot(a, a);
  }
  if (!(src_var > 0.0)) throw DegeneracyError("estimate_similarity: source landmarks coincide");
  SimilarityTransform t;
  t.rotation = std::atan2(cross_sum, dot_sum);
  t.scale = std::hypot(dot_sum, cross_sum) / src_var;
  if (!(t.scale > 0.0)) throw DegeneracyError("estimate_similarity: degenerate correspondence");
  const Vec2 rotated = SimilarityTransform{t.scale, t.rotation, {}}.apply(ms);
  t.translation = md - rotated;
  return t;
}

FiveLandmarks default_unit_template() {
  // Widely used 5-point layout for 112x112 face crops, normalized.
  return FiveLandmarks{{38.2946 / 112.0, 51.6963 / 112.0},
                       {73.5318 / 112.0, 51.5014 / 112.0},
                       {56.0252 / 112.0, 71.7366 / 112.0},
                       {41.5493 / 112.0, 92.3655 / 112.0},
                       {70.7299 / 112.0, 92.2041 / 112.0}};
}

FiveLandmarks template_landmarks(int out_size) {
  FiveLandmarks unit = default_unit_template();
  if (const char* env = std::getenv("WARPKIT_TEMPLATE"); env != nullptr && *env != '\0') {
    unit = read_landmarks(env);
  }
  auto a = unit.as_array();
  // Unit coordinates address the output square edge to edge.
  for (Vec2& p : a) p = {p.x * out_size - 0.5, p.y * out_size - 0.5};
  return FiveLandmarks::from_array(a);
}

Image align_face(const Image& image, const FiveLandmarks& landmarks, const FiveLandmarks& templ, int out_size) {
  if (out_size < 16) throw ParameterError("align_face: output size must be at least 16");
  landmarks.validate();
  const SimilarityTransform to_source = estimate_similarity(landmarks, templ).inverse();
  FlowField flow(out_size, out_size);
  for (int y = 0; y < out_size; ++y) {
    for (int x = 0; x < out_size; ++x) {
      const Vec2 s = to_source.apply({static_cast<double>(x), static_cast<double>(y)});
      flow.at(y, x) = {(2.0 * s.x + 1.0) / image.width() - 1.0, (2.0 * s.y + 1.0) / image.height() - 1.0};
    }
  }
  return resample(image, flow);
}

Image align_face(const Image& image, const FiveLandmarks& landmarks, int out_size) {
  if (out_size < 16) throw ParameterError("align_face: output size must be at least 16");
  return align_face(image, landmarks, template_landmarks(out_size), out_size);
}

namespace {

Vec2 point(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw IoError("landmarks: '" + key + "' must be [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Vec2 eye(const json& doc, const std::string& name) {
  const std::string corners = name + "_corners";
  const bool has_center = doc.contains(name), has_corners = doc.contains(corners);
  if (has_center == has_corners) {
    throw IoError("landmarks: give exactly one of '" + name + "' or '" + corners + "'");
  }
  if (has_center) return point(doc.at(name), name);
  const json& c = doc.at(corners);
  if (!c.is_array() || c.size() != 2) throw IoError("landmarks: '" + corners + "' must hold two points");
  return eye_center(point(c[0], corners), point(c[1], corners));
}

}  // namespace

FiveLandmarks landmarks_from_json(const json& doc) {
  if (!doc.is_object()) throw IoError("landmarks: expected a JSON object");
  static const std::set<std::string> allowed{"left_eye",   "right_eye",   "left_eye_corners", "right_eye_corners",
                                             "nose",       "mouth_left",  "mouth_right"};
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw IoError("landmarks: unknown field '" + key + "'");
  }
  for (const char* key : {"nose", "mouth_left", "mouth_right"}) {
    if (!doc.contains(key)) throw IoError(std::string("landmarks: missing field '") + key + "'");
  }
  FiveLandmarks lm{eye(doc, "left_eye"), eye(doc, "right_eye"), point(doc.at("nose"), "nose"),
                   point(doc.at("mouth_left"), "mouth_left"), point(doc.at("mouth_right"), "mouth_right")};
  return lm;
}

json landmarks_to_json(const FiveLandmarks& lm) {
  auto p = [](Vec2 v) { return json::array({v.x, v.y}); };
  return json{{"left_eye", p(lm.left_eye)},
              {"right_eye", p(lm.right_eye)},
              {"nose", p(lm.nose)},
              {"mouth_left", p(lm.mouth_left)},
              {"mouth_right", p(lm.mouth_right)}};
}

FiveLandmarks read_landmarks(const std::filesystem::path& path) {
  return landmarks_from_json(read_json_file(path));
}

}  // namespace warpkit
