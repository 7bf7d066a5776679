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

#include "warpkit/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "warpkit/align.hpp"
#include "warpkit/backends.hpp"
#include "warpkit/error.hpp"
#include "warpkit/fitdemo.hpp"
#include "warpkit/io.hpp"
#include "warpkit/sampler.hpp"
#include "warpkit/warp_grad.hpp"

namespace warpkit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Backend { kTps, kProjective, kDense, kLandmark };

const std::map<std::string, Backend> kBackends{{"tps", Backend::kTps},
                                               {"projective", Backend::kProjective},
                                               {"dense", Backend::kDense},
                                               {"landmark", Backend::kLandmark}};

// Parameter file for a backend, with alpha applied as an exaggeration
// factor: spline and landmark displacements and dense offsets scale
// linearly; the homography interpolates from the identity.
struct BackendModel {
  Backend backend = Backend::kTps;
  json doc;
  double lambda = kDefaultTpsLambda;

  FlowField flow(int height, int width, double alpha) const {
    switch (backend) {
      case Backend::kTps:
      case Backend::kLandmark: {
        const ControlPointSet scaled = control_points_from_json(doc).scaled(alpha);
        if (scaled.is_identity()) return FlowField::identity(height, width);
        return build_flow(fit(scaled, lambda, backend == Backend::kTps ? kMaxControlPoints : kMaxLandmarks),
                          height, width);
      }
      case Backend::kProjective:
        return projective_flow(scaled_projective(alpha), height, width);
      case Backend::kDense:
        return dense_flow(scaled_grid(alpha), height, width);
    }
    throw ParameterError("unknown backend");
  }

  Image warp(const Image& image, double alpha) const {
    switch (backend) {
      case Backend::kTps:
        return warp_image(image, control_points_from_json(doc), alpha, lambda);
      case Backend::kLandmark: {
        const ControlPointSet c = control_points_from_json(doc);
        return landmark_warp(image, c.points(), c.displacements(), alpha, lambda);
      }
      case Backend::kProjective:
        return projective_warp(image, scaled_projective(alpha));
      case Backend::kDense:
        return dense_warp(image, scaled_grid(alpha));
    }
    throw ParameterError("unknown backend");
  }

  ProjectiveParams scaled_projective(double alpha) const {
    const ProjectiveParams base = projective_from_json(doc);
    const ProjectiveParams identity;
    std::array<double, 8> h{};
    for (std::size_t i = 0; i < 8; ++i) {
      h[i] = identity.values()[i] + alpha * (base.values()[i] - identity.values()[i]);
    }
    return ProjectiveParams(h);
  }

  CoarseDeformationGrid scaled_grid(double alpha) const {
    const CoarseDeformationGrid base = dense_grid_from_json(doc);
    std::vector<Vec2> offsets = base.offsets();
    for (Vec2& o : offsets) o = alpha * o;
    return CoarseDeformationGrid(base.grid_h(), base.grid_w(), std::move(offsets));
  }
};

std::vector<double> parse_alphas(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--alphas", "not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError("--alphas", "empty list");
  return out;
}

void emit_json(const json& doc, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace

std::string sweep_filename(const std::string& stem, double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "_a%.2f.png", alpha);
  return stem + buf;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"warpkit: control-point thin-plate-spline image warping"};
  app.require_subcommand(1);

  std::string input, points, output, backend_name = "tps", alphas = "0.5,1.0,1.5,2.0", outdir;
  std::string target, landmarks;
  double alpha = 1.0, lambda = kDefaultTpsLambda, lr = 0.05, magnitude = 0.1;
  std::uint64_t seed = 0;
  int size = 0, iters = 2000;
  std::size_t k = 0;

  auto add_backend = [&](CLI::App* sub) {
    sub->add_option("--backend", backend_name, "Warp backend")
        ->check(CLI::IsMember({"tps", "projective", "dense", "landmark"}));
    sub->add_option("--lambda", lambda, "Spline regularization")->check(CLI::NonNegativeNumber);
  };

  CLI::App* warp = app.add_subcommand("warp", "Warp an image with a parameter file");
  warp->add_option("--input", input, "Input PNG")->required();
  warp->add_option("--points", points, "Parameter file (points JSON for tps/landmark)")->required();
  warp->add_option("--alpha", alpha, "Exaggeration factor");
  warp->add_option("--output", output, "Output PNG")->required();
  add_backend(warp);

  CLI::App* sweep = app.add_subcommand("sweep", "Warp at several exaggeration factors");
  sweep->add_option("--input", input, "Input PNG")->required();
  sweep->add_option("--points", points, "Parameter file")->required();
  sweep->add_option("--alphas", alphas, "Comma-separated exaggeration factors");
  sweep->add_option("--outdir", outdir, "Output directory")->required();
  add_backend(sweep);

  CLI::App* fitcmd = app.add_subcommand("fit", "Recover control points by gradient descent");
  fitcmd->add_option("--input", input, "Source PNG (omit for a seeded synthetic round trip)");
  fitcmd->add_option("--target", target, "Target PNG, required with --input");
  fitcmd->add_option("--output", output, "Report JSON (default stdout)");
  fitcmd->add_option("--seed", seed, "Seed of the synthetic round trip");
  fitcmd->add_option("--size", size, "Synthetic image side (default 64)");
  fitcmd->add_option("-k", k, "Control points (default 16)");
  fitcmd->add_option("--iters", iters, "Iterations")->check(CLI::PositiveNumber);
  fitcmd->add_option("--lr", lr, "Step size")->check(CLI::PositiveNumber);
  fitcmd->add_option("--lambda", lambda, "Spline regularization")->check(CLI::NonNegativeNumber);
  fitcmd->add_option("--magnitude", magnitude, "Synthetic max displacement")->check(CLI::Range(0.0, 0.2));

  CLI::App* grad = app.add_subcommand("check-grad", "Compare analytic warp gradients with finite differences");
  grad->add_option("--seed", seed, "Instance seed");
  grad->add_option("--size", size, "Image side (default 16)");
  grad->add_option("-k", k, "Control points (default 8)");

  CLI::App* align = app.add_subcommand("align", "Five-landmark similarity alignment");
  align->add_option("--input", input, "Input PNG")->required();
  align->add_option("--landmarks", landmarks, "Landmarks JSON (pixel coordinates)")->required();
  align->add_option("--size", size, "Output side (default 256)");
  align->add_option("--output", output, "Output PNG")->required();

  CLI::App* flowcmd = app.add_subcommand("flow", "Export the sampling grid as WFLD");
  flowcmd->add_option("--points", points, "Parameter file")->required();
  flowcmd->add_option("--input", input, "PNG whose dimensions define the grid");
  flowcmd->add_option("--size", size, "Grid side when no --input is given");
  flowcmd->add_option("--alpha", alpha, "Exaggeration factor");
  flowcmd->add_option("--output", output, "Output WFLD")->required();
  add_backend(flowcmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    auto model = [&] {
      return BackendModel{kBackends.at(backend_name), read_json_file(points), lambda};
    };

    if (*warp) {
      write_png(model().warp(read_png(input), alpha), output);
    } else if (*sweep) {
      const std::vector<double> list = parse_alphas(alphas);
      const BackendModel m = model();
      const Image image = read_png(input);
      fs::create_directories(outdir);
      const std::string stem = fs::path(input).stem().string();
      for (double a : list) {
        const fs::path out = fs::path(outdir) / sweep_filename(stem, a);
        write_png(m.warp(image, a), out);
        std::cerr << "wrote " << out.string() << '\n';
      }
    } else if (*fitcmd) {
      FitConfig config;
      config.iterations = iters;
      config.step_size = lr;
      config.lambda = lambda;
      config.seed = seed;
      if (k != 0) config.k = k;
      FitReport report;
      if (!input.empty()) {
        if (target.empty()) throw CLI::RequiredError("--target is required with --input");
        report = fit_warp(read_png(input), read_png(target), config);
      } else {
        const int side = size > 0 ? size : 64;
        report = roundtrip(seed, side, side, config.k, magnitude, config);
      }
      std::cerr << "best loss " << report.best_loss << " at iteration " << report.best_iteration << ", PSNR "
                << report.psnr << " dB\n";
      emit_json(to_json(report), output);
    } else if (*grad) {
      const int side = size > 0 ? size : 16;
      const GradientReport report = check_gradients(seed, side, side, k != 0 ? k : 8);
      std::cout << to_json(report).dump() << '\n';
      std::cerr << "max relative error " << report.max_rel_error << " (" << (report.pass ? "pass" : "FAIL")
                << ")\n";
      return report.pass ? 0 : 2;
    } else if (*align) {
      write_png(align_face(read_png(input), read_landmarks(landmarks), size > 0 ? size : kDefaultAlignSize),
                output);
    } else if (*flowcmd) {
      int h = size, w = size;
      if (!input.empty()) {
        const Image image = read_png(input);
        h = image.height();
        w = image.width();
      }
      if (h <= 0 || w <= 0) throw CLI::RequiredError("--input or --size");
      write_wfld(model().flow(h, w, alpha), output);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("warpkit");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace warpkit
