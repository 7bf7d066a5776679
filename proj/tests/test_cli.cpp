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

#include "test_util.hpp"
#include "warpkit/backends.hpp"
#include "warpkit/cli.hpp"
#include "warpkit/io.hpp"
#include "warpkit/sampler.hpp"
#include "warpkit/synthetic.hpp"

using namespace warpkit;
namespace fs = std::filesystem;
namespace wt = warpkit::testing;

namespace {

struct Workspace {
  fs::path dir;
  fs::path image;
  fs::path points;
  ControlPointSet control;
};

Workspace make_workspace(const std::string& name) {
  Workspace ws;
  ws.dir = wt::scratch_dir(name);
  Rng rng(3);
  write_png(smooth_noise_image(rng, 24, 20, 3, 2.0), ws.dir / "face.png");
  ws.image = ws.dir / "face.png";
  ws.control = random_control_points(rng, 6, 0.7, 0.1);
  write_control_points(ws.control, ws.dir / "points.json");
  ws.points = ws.dir / "points.json";
  return ws;
}

}  // namespace

TEST_CASE("sweep file names") {
  CHECK(sweep_filename("face", 0.5) == "face_a0.50.png");
  CHECK(sweep_filename("face", 2.0) == "face_a2.00.png");
  CHECK(sweep_filename("x", -1.25) == "x_a-1.25.png");
}

TEST_CASE("warp matches the library call") {
  const Workspace ws = make_workspace("cli_warp");
  const fs::path out = ws.dir / "out.png";
  REQUIRE(cli_main({"warp", "--input", ws.image.string(), "--points", ws.points.string(), "--alpha", "1.5",
                    "--output", out.string()}) == 0);
  const Image expected = warp_image(read_png(ws.image), read_control_points(ws.points), 1.5);
  const fs::path ref = ws.dir / "ref.png";
  write_png(expected, ref);
  CHECK(wt::read_bytes(out) == wt::read_bytes(ref));
}

TEST_CASE("warp with alpha zero reproduces the input bytes") {
  const Workspace ws = make_workspace("cli_identity");
  const fs::path out = ws.dir / "out.png";
  REQUIRE(cli_main({"warp", "--input", ws.image.string(), "--points", ws.points.string(), "--alpha", "0",
                    "--output", out.string()}) == 0);
  CHECK(read_png(out) == read_png(ws.image));
}

TEST_CASE("sweep writes one file per alpha") {
  const Workspace ws = make_workspace("cli_sweep");
  const fs::path outdir = ws.dir / "sweep";
  REQUIRE(cli_main({"sweep", "--input", ws.image.string(), "--points", ws.points.string(), "--alphas",
                    "0.5,1,1.5,2", "--outdir", outdir.string()}) == 0);
  for (const char* name : {"face_a0.50.png", "face_a1.00.png", "face_a1.50.png", "face_a2.00.png"}) {
    CHECK(fs::exists(outdir / name));
  }
  const Image a2 = read_png(outdir / "face_a2.00.png");
  const fs::path ref = ws.dir / "ref.png";
  write_png(warp_image(read_png(ws.image), ws.control, 2.0), ref);
  CHECK(a2 == read_png(ref));
  CHECK(cli_main({"sweep", "--input", ws.image.string(), "--points", ws.points.string(), "--alphas", "1,x",
                  "--outdir", outdir.string()}) == 1);
}

TEST_CASE("flow export matches the spline grid") {
  const Workspace ws = make_workspace("cli_flow");
  const fs::path out = ws.dir / "grid.wfld";
  REQUIRE(cli_main({"flow", "--points", ws.points.string(), "--input", ws.image.string(), "--output",
                    out.string()}) == 0);
  const FlowField grid = read_wfld(out);
  const FlowField ref = build_flow(fit(ws.control), 24, 20);
  REQUIRE(grid.height() == 24);
  REQUIRE(grid.width() == 20);
  for (std::size_t i = 0; i < ref.data().size(); ++i) {
    CHECK(grid.data()[i].x == static_cast<double>(static_cast<float>(ref.data()[i].x)));
    CHECK(grid.data()[i].y == static_cast<double>(static_cast<float>(ref.data()[i].y)));
  }
}

TEST_CASE("other backends") {
  const Workspace ws = make_workspace("cli_backends");
  wt::write_text(ws.dir / "h.json", R"({"version":1,"homography":[1,0,0.1,0,1,0,0,0]})");
  const fs::path out = ws.dir / "p.png";
  REQUIRE(cli_main({"warp", "--backend", "projective", "--input", ws.image.string(), "--points",
                    (ws.dir / "h.json").string(), "--output", out.string()}) == 0);
  const fs::path ref = ws.dir / "p_ref.png";
  write_png(projective_warp(read_png(ws.image), ProjectiveParams::translation({0.1, 0.0})), ref);
  CHECK(wt::read_bytes(out) == wt::read_bytes(ref));

  wt::write_text(ws.dir / "g.json", R"({"version":1,"grid_h":2,"grid_w":2,"offsets":[[0,0],[0,0],[0,0],[0,0]]})");
  REQUIRE(cli_main({"warp", "--backend", "dense", "--input", ws.image.string(), "--points",
                    (ws.dir / "g.json").string(), "--output", out.string()}) == 0);
  CHECK(read_png(out) == read_png(ws.image));

  REQUIRE(cli_main({"warp", "--backend", "landmark", "--input", ws.image.string(), "--points",
                    ws.points.string(), "--output", out.string()}) == 0);
  const fs::path tps = ws.dir / "t.png";
  REQUIRE(cli_main({"warp", "--input", ws.image.string(), "--points", ws.points.string(), "--output",
                    tps.string()}) == 0);
  CHECK(wt::read_bytes(out) == wt::read_bytes(tps));
}

TEST_CASE("check-grad and fit") {
  const Workspace ws = make_workspace("cli_fit");
  CHECK(cli_main({"check-grad", "--seed", "3", "--size", "12", "-k", "5"}) == 0);
  const fs::path report = ws.dir / "fit.json";
  REQUIRE(cli_main({"fit", "--seed", "1", "--size", "16", "-k", "4", "--iters", "20", "--output",
                    report.string()}) == 0);
  const nlohmann::json doc = read_json_file(report);
  CHECK(doc.at("trajectory").size() == 20);
  CHECK(doc.contains("psnr_db"));
  CHECK(cli_main({"fit", "--input", ws.image.string()}) == 1);
}

TEST_CASE("align command") {
  const Workspace ws = make_workspace("cli_align");
  wt::write_text(ws.dir / "lm.json", R"({"left_eye_corners":[[5,8],[7,8]],"right_eye":[14,8],
      "nose":[10,12],"mouth_left":[7,17],"mouth_right":[13,17]})");
  const fs::path out = ws.dir / "aligned.png";
  REQUIRE(cli_main({"align", "--input", ws.image.string(), "--landmarks", (ws.dir / "lm.json").string(),
                    "--size", "32", "--output", out.string()}) == 0);
  CHECK(read_png(out).height() == 32);
}

TEST_CASE("exit codes") {
  const Workspace ws = make_workspace("cli_exit");
  CHECK(cli_main({"--help"}) == 0);
  CHECK(cli_main({}) == 1);
  CHECK(cli_main({"warp", "--bogus"}) == 1);
  CHECK(cli_main({"warp", "--input", ws.image.string()}) == 1);
  CHECK(cli_main({"warp", "--backend", "nope", "--input", ws.image.string(), "--points", ws.points.string(),
                  "--output", (ws.dir / "o.png").string()}) == 1);
  // Data errors: unreadable image, malformed parameter file.
  CHECK(cli_main({"warp", "--input", (ws.dir / "missing.png").string(), "--points", ws.points.string(),
                  "--output", (ws.dir / "o.png").string()}) == 2);
  wt::write_text(ws.dir / "bad.json", R"({"version":1,"coord_space":"pixel","k":0,"points":[],"displacements":[]})");
  CHECK(cli_main({"warp", "--input", ws.image.string(), "--points", (ws.dir / "bad.json").string(), "--output",
                  (ws.dir / "o.png").string()}) == 2);
  wt::write_text(ws.dir / "dup.json",
                 R"({"version":1,"coord_space":"ndc","k":3,"points":[[0,0],[0,0],[0.5,0.5]],
                     "displacements":[[0.1,0],[0.1,0],[0,0]]})");
  CHECK(cli_main({"warp", "--input", ws.image.string(), "--points", (ws.dir / "dup.json").string(), "--output",
                  (ws.dir / "o.png").string()}) == 2);
}
