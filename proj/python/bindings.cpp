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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "warpkit/align.hpp"
#include "warpkit/backends.hpp"
#include "warpkit/error.hpp"
#include "warpkit/fitdemo.hpp"
#include "warpkit/io.hpp"
#include "warpkit/losses.hpp"
#include "warpkit/sampler.hpp"
#include "warpkit/tps.hpp"
#include "warpkit/warp_grad.hpp"

namespace py = pybind11;
using namespace warpkit;

namespace {

// Python type of DivergenceError, which also carries the loss trajectory.
PyObject* divergence_type = nullptr;

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (H, W) or (H, W, C) array -> Image.
Image to_image(const Array& a) {
  if (a.ndim() != 2 && a.ndim() != 3) throw ShapeError("image: expected a 2-D or 3-D array");
  const int h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  return Image(h, w, c, std::vector<double>(a.data(), a.data() + a.size()));
}

Array from_image(const Image& img) {
  Array out({img.height(), img.width(), img.channels()});
  std::copy(img.data().begin(), img.data().end(), out.mutable_data());
  return out;
}

std::vector<Vec2> pairs(const double* data, std::size_t n) {
  std::vector<Vec2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {data[2 * i], data[2 * i + 1]};
  return out;
}

std::vector<Vec2> to_points(const Array& a, const char* what) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw ShapeError(std::string(what) + ": expected an (n, 2) array");
  return pairs(a.data(), static_cast<std::size_t>(a.shape(0)));
}

Array from_points(const std::vector<Vec2>& pts) {
  Array out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  double* d = out.mutable_data();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    d[2 * i] = pts[i].x;
    d[2 * i + 1] = pts[i].y;
  }
  return out;
}

ControlPointSet to_control(const Array& points, const Array& displacements) {
  return ControlPointSet(to_points(points, "points"), to_points(displacements, "displacements"));
}

FlowField to_flow(const Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 2) throw ShapeError("flow: expected an (H, W, 2) array");
  return FlowField(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)),
                   pairs(a.data(), static_cast<std::size_t>(a.shape(0) * a.shape(1))));
}

Array from_flow(const FlowField& f) {
  Array out = from_points(f.data());
  return out.reshape({f.height(), f.width(), 2});
}

Logits rows_of(const Array& a, std::size_t classes_multiple, const char* what) {
  if (a.ndim() != 2 || a.shape(1) % static_cast<py::ssize_t>(classes_multiple) != 0) {
    throw ShapeError(std::string(what) + ": unexpected logits shape");
  }
  return Logits(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)),
                std::vector<double>(a.data(), a.data() + a.size()));
}

PatchLogits to_patch(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw ShapeError("patch logits: expected an (n, 3) array");
  return PatchLogits(static_cast<std::size_t>(a.shape(0)), std::vector<double>(a.data(), a.data() + a.size()));
}

IdentityLogits to_identity(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) % 3 != 0) throw ShapeError("identity logits: expected an (n, 3M) array");
  return IdentityLogits(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1) / 3),
                        std::vector<double>(a.data(), a.data() + a.size()));
}

FiveLandmarks to_landmarks(const Array& a) {
  const auto pts = to_points(a, "landmarks");
  if (pts.size() != 5) throw ShapeError("landmarks: expected a (5, 2) array");
  return FiveLandmarks{pts[0], pts[1], pts[2], pts[3], pts[4]};
}

py::dict report_dict(const FitReport& r) {
  py::dict d;
  d["points"] = from_points(r.control.points());
  d["displacements"] = from_points(r.control.displacements());
  d["trajectory"] = r.trajectory;
  d["best_loss"] = r.best_loss;
  d["best_iteration"] = r.best_iteration;
  d["psnr"] = r.psnr;
  return d;
}

FitConfig make_config(std::size_t k, int iterations, double step_size, double lambda, std::uint64_t seed) {
  FitConfig c;
  c.k = k;
  c.iterations = iterations;
  c.step_size = step_size;
  c.lambda = lambda;
  c.seed = seed;
  return c;
}

}  // namespace

PYBIND11_MODULE(_warpkit, m) {
  m.doc() = "Control-point thin-plate-spline image warping";

  // Translators run most recent first, so subclasses register after the base.
  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<ShapeError>(m, "ShapeError", base);
  py::register_exception<ParameterError>(m, "ParameterError", base);
  py::register_exception<DuplicatePointError>(m, "DuplicatePointError", base);
  py::register_exception<NumericalError>(m, "NumericalError", base);
  py::register_exception<DegeneracyError>(m, "DegeneracyError", base);
  py::register_exception<LabelError>(m, "LabelError", base);
  py::register_exception<IoError>(m, "IoError", base);
  divergence_type = py::register_exception<DivergenceError>(m, "DivergenceError", base).ptr();
  Py_INCREF(divergence_type);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DivergenceError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(divergence_type)(e.what());
      exc.attr("trajectory") = e.trajectory();
      PyErr_SetObject(divergence_type, exc.ptr());
    }
  });

  py::class_<TpsParameters>(m, "TpsParameters")
      .def_property_readonly("w", [](const TpsParameters& p) { return from_points(p.w); })
      .def_property_readonly("v", [](const TpsParameters& p) { return p.v; })
      .def_property_readonly("b", [](const TpsParameters& p) { return std::array<double, 2>{p.b.x, p.b.y}; })
      .def_property_readonly("centers", [](const TpsParameters& p) { return from_points(p.centers); })
      .def_readonly("regularization", &TpsParameters::regularization)
      .def(
          "evaluate",
          [](const TpsParameters& p, const Array& q) {
            auto pts = to_points(q, "query");
            for (Vec2& x : pts) x = evaluate(p, x);
            return from_points(pts);
          },
          py::arg("q"), "Maps an (n, 2) array of destination coordinates to source coordinates.");

  m.def("kernel", &kernel, py::arg("r"));
  m.def(
      "fit",
      [](const Array& points, const Array& displacements, double lambda) {
        return fit(to_control(points, displacements), lambda);
      },
      py::arg("points"), py::arg("displacements"), py::arg("lam") = kDefaultTpsLambda);
  m.def(
      "build_flow", [](const TpsParameters& p, int h, int w) { return from_flow(build_flow(p, h, w)); },
      py::arg("params"), py::arg("height"), py::arg("width"));
  m.def(
      "resample", [](const Array& img, const Array& flow) { return from_image(resample(to_image(img), to_flow(flow))); },
      py::arg("image"), py::arg("flow"));
  m.def(
      "warp_image",
      [](const Array& img, const Array& points, const Array& disp, double alpha, double lambda) {
        return from_image(warp_image(to_image(img), to_control(points, disp), alpha, lambda));
      },
      py::arg("image"), py::arg("points"), py::arg("displacements"), py::arg("alpha") = 1.0,
      py::arg("lam") = kDefaultTpsLambda);
  m.def(
      "warp_vjp",
      [](const Array& img, const Array& points, const Array& disp, const Array& upstream, double alpha,
         double lambda) {
        const WarpCotangents g =
            warp_vjp(to_image(img), to_control(points, disp), alpha, lambda, to_image(upstream));
        py::dict d;
        d["image"] = from_image(g.d_image);
        d["points"] = from_points(g.d_points);
        d["displacements"] = from_points(g.d_displacements);
        return d;
      },
      py::arg("image"), py::arg("points"), py::arg("displacements"), py::arg("upstream"), py::arg("alpha") = 1.0,
      py::arg("lam") = kDefaultTpsLambda);
  m.def(
      "check_gradients",
      [](std::uint64_t seed, int h, int w, std::size_t k) {
        const GradientReport r = check_gradients(seed, h, w, k);
        py::dict d;
        d["max_rel_error"] = r.max_rel_error;
        d["max_abs_error"] = r.max_abs_error;
        d["checked"] = r.checked;
        d["skipped"] = r.skipped;
        d["masked_pixels"] = r.masked_pixels;
        d["passed"] = r.pass;
        return d;
      },
      py::arg("seed"), py::arg("height") = 16, py::arg("width") = 16, py::arg("k") = 8);

  m.def(
      "projective_warp",
      [](const Array& img, const std::array<double, 8>& h) { return from_image(projective_warp(to_image(img), ProjectiveParams(h))); },
      py::arg("image"), py::arg("homography"));
  m.def(
      "dense_warp",
      [](const Array& img, const Array& offsets) {
        if (offsets.ndim() != 3 || offsets.shape(2) != 2) throw ShapeError("offsets: expected a (G, G, 2) array");
        const auto flat = pairs(offsets.data(), static_cast<std::size_t>(offsets.shape(0) * offsets.shape(1)));
        return from_image(dense_warp(to_image(img), CoarseDeformationGrid(static_cast<int>(offsets.shape(0)),
                                                                          static_cast<int>(offsets.shape(1)), flat)));
      },
      py::arg("image"), py::arg("offsets"));
  m.def(
      "landmark_warp",
      [](const Array& img, const Array& anchors, const Array& disp, double alpha, double lambda) {
        return from_image(
            landmark_warp(to_image(img), to_points(anchors, "anchors"), to_points(disp, "displacements"), alpha, lambda));
      },
      py::arg("image"), py::arg("anchors"), py::arg("displacements"), py::arg("alpha") = 1.0,
      py::arg("lam") = kDefaultTpsLambda);

  m.def(
      "instance_norm", [](const Array& f, double eps) { return from_image(instance_norm(to_image(f), eps)); },
      py::arg("features"), py::arg("eps") = kDefaultNormEpsilon);
  m.def(
      "adain",
      [](const Array& f, std::vector<double> mean, std::vector<double> scale, double eps) {
        return from_image(adain(to_image(f), {std::move(mean), std::move(scale)}, eps));
      },
      py::arg("features"), py::arg("mean"), py::arg("scale"), py::arg("eps") = kDefaultNormEpsilon);
  m.def(
      "mean_cross_entropy",
      [](const Array& logits, const std::vector<std::size_t>& targets) {
        return mean_cross_entropy(rows_of(logits, 1, "logits"), targets);
      },
      py::arg("logits"), py::arg("targets"));
  m.def(
      "identity_mapping_loss",
      [](const Array& a, const Array& b) { return identity_mapping_loss(to_image(a), to_image(b)); },
      py::arg("reconstruction"), py::arg("original"));
  m.def(
      "patch_adv_loss_generator", [](const Array& g) { return patch_adv_loss_generator(to_patch(g)); },
      py::arg("generated"));
  m.def(
      "patch_adv_loss_discriminator",
      [](const Array& c, const Array& p, const Array& g) {
        return patch_adv_loss_discriminator(to_patch(c), to_patch(p), to_patch(g));
      },
      py::arg("caricatures"), py::arg("photos"), py::arg("generated"));
  m.def(
      "identity_adv_loss_generator",
      [](const Array& g, const std::vector<std::size_t>& labels) {
        return identity_adv_loss_generator(to_identity(g), labels);
      },
      py::arg("generated"), py::arg("photo_labels"));
  m.def(
      "identity_adv_loss_discriminator",
      [](const Array& c, const std::vector<std::size_t>& yc, const Array& p, const std::vector<std::size_t>& yp,
         const Array& g, const std::vector<std::size_t>& yg) {
        return identity_adv_loss_discriminator(to_identity(c), yc, to_identity(p), yp, to_identity(g), yg);
      },
      py::arg("caricatures"), py::arg("caricature_labels"), py::arg("photos"), py::arg("photo_labels"),
      py::arg("generated"), py::arg("generated_labels"));
  m.def(
      "total_generator_loss",
      [](double patch, double identity, double idt_c, double idt_p, double wp, double wg, double widt) {
        return total_generator_loss({patch, identity, idt_c, idt_p}, {wp, wg, widt});
      },
      py::arg("patch"), py::arg("identity"), py::arg("idt_caricature"), py::arg("idt_photo"),
      py::arg("patch_weight") = 2.0, py::arg("identity_weight") = 1.0, py::arg("idt_weight") = 10.0);

  m.def(
      "fit_warp",
      [](const Array& src, const Array& dst, std::size_t k, int iterations, double step_size, double lambda) {
        return report_dict(fit_warp(to_image(src), to_image(dst), make_config(k, iterations, step_size, lambda, 0)));
      },
      py::arg("source"), py::arg("target"), py::arg("k") = kDefaultControlPoints, py::arg("iterations") = 2000,
      py::arg("step_size") = 0.05, py::arg("lam") = kDefaultTpsLambda);
  m.def(
      "roundtrip",
      [](std::uint64_t seed, int size, std::size_t k, double magnitude, int iterations) {
        return report_dict(roundtrip(seed, size, size, k, magnitude, make_config(k, iterations, 0.05, kDefaultTpsLambda, seed)));
      },
      py::arg("seed"), py::arg("size") = 64, py::arg("k") = kDefaultControlPoints, py::arg("magnitude") = 0.1,
      py::arg("iterations") = 2000);

  m.def(
      "read_png", [](const std::string& path) { return from_image(read_png(path)); }, py::arg("path"));
  m.def(
      "write_png", [](const Array& img, const std::string& path) { write_png(to_image(img), path); }, py::arg("image"),
      py::arg("path"));
  m.def(
      "read_wfld", [](const std::string& path) { return from_flow(read_wfld(std::filesystem::path(path))); },
      py::arg("path"));
  m.def(
      "write_wfld", [](const Array& flow, const std::string& path) { write_wfld(to_flow(flow), std::filesystem::path(path)); },
      py::arg("flow"), py::arg("path"));

  m.def(
      "estimate_similarity",
      [](const Array& source, const Array& templ) {
        const SimilarityTransform t = estimate_similarity(to_landmarks(source), to_landmarks(templ));
        py::dict d;
        d["scale"] = t.scale;
        d["rotation"] = t.rotation;
        d["translation"] = std::array<double, 2>{t.translation.x, t.translation.y};
        return d;
      },
      py::arg("source"), py::arg("template"));
  m.def(
      "template_landmarks",
      [](int size) {
        const auto a = template_landmarks(size).as_array();
        return from_points(std::vector<Vec2>(a.begin(), a.end()));
      },
      py::arg("size") = kDefaultAlignSize);
  m.def(
      "align_face",
      [](const Array& img, const Array& lm, int size) { return from_image(align_face(to_image(img), to_landmarks(lm), size)); },
      py::arg("image"), py::arg("landmarks"), py::arg("size") = kDefaultAlignSize);
}
