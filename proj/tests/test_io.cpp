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

#include <sstream>

#include "test_util.hpp"
#include "warpkit/align.hpp"
#include "warpkit/error.hpp"
#include "warpkit/io.hpp"
#include "warpkit/synthetic.hpp"

using namespace warpkit;
using nlohmann::json;
namespace wt = warpkit::testing;

namespace {

// 2x2 8-bit grayscale, pixels {0, 1, 128, 255}.
const std::vector<std::uint8_t> kGray2x2{
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00, 0x00,
    0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x00, 0x00, 0x00, 0x00, 0x57, 0xdd, 0x52, 0xf8, 0x00, 0x00, 0x00,
    0x0e, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x60, 0x64, 0x68, 0xf8, 0x0f, 0x00, 0x02, 0x09, 0x01,
    0x81, 0x84, 0x0c, 0x64, 0x0a, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
// 1x1 16-bit grayscale.
const std::vector<std::uint8_t> kGray16{
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00,
    0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00, 0x00, 0x6a, 0xee, 0x47, 0x16, 0x00,
    0x00, 0x00, 0x0b, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x10, 0x32, 0x01, 0x00, 0x00, 0x5b, 0x00,
    0x47, 0x96, 0xfb, 0x1b, 0x65, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
// 1x1 8-bit RGBA.
const std::vector<std::uint8_t> kRgba{
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44, 0x52, 0x00,
    0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x06, 0x00, 0x00, 0x00, 0x1f, 0x15, 0xc4, 0x89, 0x00,
    0x00, 0x00, 0x0d, 0x49, 0x44, 0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x64, 0x62, 0x66, 0x01, 0x00, 0x00,
    0x19, 0x00, 0x0b, 0xe7, 0x5a, 0x46, 0xa4, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42,
    0x60, 0x82};

json valid_points() {
  return json::parse(R"({"version":1,"coord_space":"ndc","k":3,
                         "points":[[0,0],[0.5,0],[0,0.5]],
                         "displacements":[[0.1,0],[0,0],[0,-0.1]]})");
}

}  // namespace

TEST_CASE("png reading maps bytes to v/255") {
  const auto dir = wt::scratch_dir("png_fixture");
  wt::write_bytes(dir / "g.png", kGray2x2);
  const Image img = read_png(dir / "g.png");
  REQUIRE(img.height() == 2);
  REQUIRE(img.width() == 2);
  REQUIRE(img.channels() == 1);
  CHECK(img.data() == std::vector<double>{0.0, 1.0 / 255.0, 128.0 / 255.0, 1.0});
}

TEST_CASE("png round trip is lossless for 8-bit data") {
  const auto dir = wt::scratch_dir("png_roundtrip");
  Rng rng(0);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int channels : {1, 3}) {
    Image img(7, 5, channels);
    for (double& v : img.data()) v = byte(rng) / 255.0;
    write_png(img, dir / "a.png");
    const Image back = read_png(dir / "a.png");
    CHECK(back == img);
    write_png(back, dir / "b.png");
    CHECK(wt::read_bytes(dir / "a.png") == wt::read_bytes(dir / "b.png"));
  }
}

TEST_CASE("quantization rounds half away from zero and clamps") {
  CHECK(quantize(0.5) == 128);
  CHECK(quantize(127.5 / 255.0) == 128);
  CHECK(quantize(-0.2) == 0);
  CHECK(quantize(1.7) == 255);
  CHECK(quantize(NAN) == 0);
  for (int v = 0; v < 256; ++v) CHECK(quantize(v / 255.0) == v);
}

TEST_CASE("png errors") {
  const auto dir = wt::scratch_dir("png_errors");
  wt::write_bytes(dir / "16.png", kGray16);
  wt::write_bytes(dir / "rgba.png", kRgba);
  wt::write_text(dir / "junk.png", "not a png at all");
  std::vector<std::uint8_t> truncated(kGray2x2.begin(), kGray2x2.begin() + 45);
  wt::write_bytes(dir / "trunc.png", truncated);
  CHECK_THROWS_WITH_AS(read_png(dir / "16.png"), doctest::Contains("bit depth"), IoError);
  CHECK_THROWS_WITH_AS(read_png(dir / "rgba.png"), doctest::Contains("color type"), IoError);
  CHECK_THROWS_AS(read_png(dir / "junk.png"), IoError);
  CHECK_THROWS_AS(read_png(dir / "trunc.png"), IoError);
  CHECK_THROWS_AS(read_png(dir / "missing.png"), IoError);
  CHECK_THROWS_AS(write_png(Image(2, 2, 2), dir / "two.png"), IoError);
}

TEST_CASE("WFLD layout and round trip") {
  FlowField flow(2, 3);
  for (std::size_t i = 0; i < flow.data().size(); ++i) {
    flow.data()[i] = {0.25 * static_cast<double>(i) - 1.0, -0.5 + 0.125 * static_cast<double>(i)};
  }
  std::stringstream buf;
  write_wfld(flow, buf);
  const std::string bytes = buf.str();
  REQUIRE(bytes.size() == 16 + 6 * 8);
  CHECK(bytes.substr(0, 4) == "WFLD");
  CHECK(bytes[4] == 1);
  CHECK(bytes[8] == 2);
  CHECK(bytes[12] == 3);
  // First float: -1.0f little-endian = 00 00 80 bf.
  CHECK(static_cast<unsigned char>(bytes[16 + 2]) == 0x80);
  CHECK(static_cast<unsigned char>(bytes[16 + 3]) == 0xbf);

  const FlowField back = read_wfld(buf);
  CHECK(back == flow);
  std::stringstream again;
  write_wfld(back, again);
  CHECK(again.str() == bytes);
}

TEST_CASE("WFLD of arbitrary doubles round-trips through float32") {
  Rng rng(2);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  FlowField flow(5, 4);
  for (Vec2& v : flow.data()) v = {u(rng), u(rng)};
  std::stringstream a;
  write_wfld(flow, a);
  const FlowField once = read_wfld(a);
  for (std::size_t i = 0; i < flow.data().size(); ++i) {
    CHECK(once.data()[i].x == static_cast<double>(static_cast<float>(flow.data()[i].x)));
  }
  std::stringstream b, c;
  write_wfld(once, b);
  write_wfld(read_wfld(b), c);
  std::stringstream ref;
  write_wfld(once, ref);
  CHECK(c.str() == ref.str());
}

TEST_CASE("WFLD errors") {
  std::stringstream bad_magic("WFLX\x01\x00\x00\x00");
  CHECK_THROWS_AS(read_wfld(bad_magic), IoError);
  FlowField flow(2, 2);
  std::stringstream buf;
  write_wfld(flow, buf);
  std::string s = buf.str();
  std::stringstream truncated(s.substr(0, s.size() - 3));
  CHECK_THROWS_AS(read_wfld(truncated), IoError);
  std::stringstream trailing(s + "x");
  CHECK_THROWS_AS(read_wfld(trailing), IoError);
  std::string v2 = s;
  v2[4] = 2;
  std::stringstream version(v2);
  CHECK_THROWS_AS(read_wfld(version), IoError);
}

TEST_CASE("strict control-point JSON") {
  const ControlPointSet c = control_points_from_json(valid_points());
  CHECK(c.size() == 3);
  CHECK(c.displacements()[2] == Vec2{0.0, -0.1});
  CHECK(control_points_from_json(control_points_to_json(c)).points() == c.points());

  json extra = valid_points();
  extra["comment"] = "hi";
  CHECK_THROWS_WITH_AS(control_points_from_json(extra), doctest::Contains("unknown field"), IoError);
  json pixel = valid_points();
  pixel["coord_space"] = "pixel";
  CHECK_THROWS_WITH_AS(control_points_from_json(pixel), doctest::Contains("coord_space"), IoError);
  json count = valid_points();
  count["k"] = 4;
  CHECK_THROWS_AS(control_points_from_json(count), IoError);
  json version = valid_points();
  version["version"] = 2;
  CHECK_THROWS_AS(control_points_from_json(version), IoError);
  json missing = valid_points();
  missing.erase("displacements");
  CHECK_THROWS_AS(control_points_from_json(missing), IoError);
  json shape = valid_points();
  shape["points"][0] = json::array({1, 2, 3});
  CHECK_THROWS_AS(control_points_from_json(shape), IoError);
}

TEST_CASE("backend parameter JSON") {
  const ProjectiveParams p = projective_from_json(json::parse(R"({"version":1,"homography":[1,0,0.1,0,1,0,0,0]})"));
  CHECK(p.values()[2] == 0.1);
  CHECK_THROWS_AS(projective_from_json(json::parse(R"({"version":1,"homography":[1,0,0]})")), IoError);
  const CoarseDeformationGrid g =
      dense_grid_from_json(json::parse(R"({"version":1,"grid_h":2,"grid_w":2,"offsets":[[0,0],[0,0],[0.1,0],[0,0]]})"));
  CHECK(g.at(1, 0) == Vec2{0.1, 0.0});
  CHECK_THROWS_AS(dense_grid_from_json(json::parse(R"({"version":1,"grid_h":2,"grid_w":2,"offsets":[],"x":1})")),
                  IoError);
}

TEST_CASE("landmark JSON") {
  const FiveLandmarks lm = landmarks_from_json(json::parse(R"({
      "left_eye_corners": [[10, 20], [20, 22]], "right_eye": [40, 21],
      "nose": [30, 35], "mouth_left": [20, 50], "mouth_right": [40, 50]})"));
  CHECK(lm.left_eye == Vec2{15.0, 21.0});
  CHECK(lm.right_eye == Vec2{40.0, 21.0});
  CHECK(landmarks_from_json(landmarks_to_json(lm)).nose == lm.nose);
  CHECK_THROWS_AS(landmarks_from_json(json::parse(R"({"left_eye":[0,0],"left_eye_corners":[[0,0],[1,1]],
      "right_eye":[5,0],"nose":[1,1],"mouth_left":[0,2],"mouth_right":[2,2]})")),
                  IoError);
  CHECK_THROWS_AS(landmarks_from_json(json::parse(R"({"left_eye":[0,0],"right_eye":[5,0],"nose":[1,1],
      "mouth_left":[0,2],"mouth_right":[2,2],"chin":[1,5]})")),
                  IoError);
}
