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

#include "warpkit/io.hpp"

#include <png.h>

#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <set>

#include "warpkit/error.hpp"

namespace warpkit {

using nlohmann::json;

// ---------------------------------------------------------------------------
// PNG

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_handler(png_structp png, png_const_charp msg) {
  auto* reason = static_cast<std::string*>(png_get_error_ptr(png));
  if (reason != nullptr) *reason = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

std::uint8_t quantize(double value) {
  const double scaled = std::round(value * 255.0);  // half away from zero
  if (!(scaled > 0.0)) return 0;
  if (scaled >= 255.0) return 255;
  return static_cast<std::uint8_t>(scaled);
}

Image read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("png: cannot open " + path.string());
  std::array<unsigned char, 8> sig{};
  if (std::fread(sig.data(), 1, sig.size(), file.get()) != sig.size() || png_sig_cmp(sig.data(), 0, 8) != 0) {
    throw IoError("png: " + path.string() + " is not a PNG file");
  }

  std::string reason = "malformed data";
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &reason, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("png: out of memory");
  }

  int height = 0, width = 0, channels = 0;
  int bit_depth = 0, color_type = 0;
  std::vector<unsigned char> bytes;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("png: " + path.string() + ": " + reason);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  bit_depth = png_get_bit_depth(png, info);
  color_type = png_get_color_type(png, info);
  if (bit_depth != 8) {
    reason = "unsupported bit depth " + std::to_string(bit_depth) + " (8-bit required)";
    png_error(png, reason.c_str());
  }
  if (color_type == PNG_COLOR_TYPE_GRAY) {
    channels = 1;
  } else if (color_type == PNG_COLOR_TYPE_RGB) {
    channels = 3;
  } else {
    reason = "unsupported color type " + std::to_string(color_type) + " (grayscale or RGB required)";
    png_error(png, reason.c_str());
  }
  if (png_get_interlace_type(png, info) != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  bytes.resize(stride * height);
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = bytes.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> data(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) data[i] = bytes[i] / 255.0;
  return Image(height, width, channels, std::move(data));
}

void write_png(const Image& image, const std::filesystem::path& path) {
  if (image.empty()) throw IoError("png: cannot write an empty image");
  int color_type = 0;
  if (image.channels() == 1) {
    color_type = PNG_COLOR_TYPE_GRAY;
  } else if (image.channels() == 3) {
    color_type = PNG_COLOR_TYPE_RGB;
  } else {
    throw IoError("png: can only write 1 or 3 channels, image has " + std::to_string(image.channels()));
  }
  std::vector<unsigned char> bytes(image.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize(image.data()[i]);

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("png: cannot create " + path.string());
  std::string reason = "write failure";
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &reason, png_error_handler, png_warning_handler);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png: " + path.string() + ": " + reason);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(image.width()) * image.channels();
  for (int y = 0; y < image.height(); ++y) png_write_row(png, bytes.data() + stride * y);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

// ---------------------------------------------------------------------------
// JSON documents

namespace {

void require_keys(const json& doc, const std::set<std::string>& allowed, const std::string& what) {
  if (!doc.is_object()) throw IoError(what + ": expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw IoError(what + ": unknown field '" + key + "'");
  }
  for (const std::string& key : allowed) {
    if (!doc.contains(key)) throw IoError(what + ": missing field '" + key + "'");
  }
}

void require_version(const json& doc, const std::string& what) {
  if (!doc.at("version").is_number_integer() || doc.at("version").get<int>() != 1) {
    throw IoError(what + ": unsupported version (expected 1)");
  }
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw IoError(what + ": expected a number");
  return v.get<double>();
}

std::vector<Vec2> pairs(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw IoError(what + ": expected an array of [x, y] pairs");
  std::vector<Vec2> out;
  out.reserve(arr.size());
  for (const json& p : arr) {
    if (!p.is_array() || p.size() != 2) throw IoError(what + ": expected [x, y] pairs");
    out.push_back({number(p[0], what), number(p[1], what)});
  }
  return out;
}

json pairs_to_json(const std::vector<Vec2>& v) {
  json arr = json::array();
  for (Vec2 p : v) arr.push_back({p.x, p.y});
  return arr;
}

}  // namespace

ControlPointSet control_points_from_json(const json& doc) {
  const std::string what = "points file";
  require_keys(doc, {"version", "coord_space", "k", "points", "displacements"}, what);
  require_version(doc, what);
  if (!doc.at("coord_space").is_string() || doc.at("coord_space").get<std::string>() != "ndc") {
    throw IoError(what + ": coord_space must be \"ndc\"");
  }
  if (!doc.at("k").is_number_integer()) throw IoError(what + ": k must be an integer");
  const auto k = doc.at("k").get<long long>();
  std::vector<Vec2> pts = pairs(doc.at("points"), what + " points");
  std::vector<Vec2> disp = pairs(doc.at("displacements"), what + " displacements");
  if (k < 0 || static_cast<std::size_t>(k) != pts.size() || pts.size() != disp.size()) {
    throw IoError(what + ": k=" + std::to_string(k) + " but " + std::to_string(pts.size()) + " points and " +
                  std::to_string(disp.size()) + " displacements");
  }
  return ControlPointSet(std::move(pts), std::move(disp));
}

json control_points_to_json(const ControlPointSet& control) {
  return json{{"version", 1},
              {"coord_space", "ndc"},
              {"k", control.size()},
              {"points", pairs_to_json(control.points())},
              {"displacements", pairs_to_json(control.displacements())}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

ControlPointSet read_control_points(const std::filesystem::path& path) {
  return control_points_from_json(read_json_file(path));
}

void write_control_points(const ControlPointSet& control, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path.string());
  out << control_points_to_json(control).dump(2) << '\n';
}

ProjectiveParams projective_from_json(const json& doc) {
  const std::string what = "projective file";
  require_keys(doc, {"version", "homography"}, what);
  require_version(doc, what);
  const json& h = doc.at("homography");
  if (!h.is_array() || h.size() != 8) throw IoError(what + ": homography must hold 8 numbers");
  std::array<double, 8> v{};
  for (std::size_t i = 0; i < 8; ++i) v[i] = number(h[i], what);
  return ProjectiveParams(v);
}

CoarseDeformationGrid dense_grid_from_json(const json& doc) {
  const std::string what = "dense grid file";
  require_keys(doc, {"version", "grid_h", "grid_w", "offsets"}, what);
  require_version(doc, what);
  if (!doc.at("grid_h").is_number_integer() || !doc.at("grid_w").is_number_integer()) {
    throw IoError(what + ": grid_h and grid_w must be integers");
  }
  return CoarseDeformationGrid(doc.at("grid_h").get<int>(), doc.at("grid_w").get<int>(),
                               pairs(doc.at("offsets"), what));
}

// ---------------------------------------------------------------------------
// WFLD

namespace {

constexpr std::array<char, 4> kWfldMagic{'W', 'F', 'L', 'D'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                              static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw IoError("wfld: truncated header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& out, double v) {
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
}

}  // namespace

void write_wfld(const FlowField& flow, std::ostream& out) {
  out.write(kWfldMagic.data(), 4);
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(flow.height()));
  put_u32(out, static_cast<std::uint32_t>(flow.width()));
  for (Vec2 v : flow.data()) {
    put_f32(out, v.x);
    put_f32(out, v.y);
  }
  if (!out) throw IoError("wfld: write failed");
}

FlowField read_wfld(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4) || magic != kWfldMagic) throw IoError("wfld: bad magic bytes");
  const std::uint32_t version = get_u32(in);
  if (version != 1) throw IoError("wfld: unsupported version " + std::to_string(version));
  const std::uint32_t h = get_u32(in);
  const std::uint32_t w = get_u32(in);
  if (h == 0 || w == 0 || h > (1u << 16) || w > (1u << 16)) {
    throw IoError("wfld: implausible dimensions " + std::to_string(h) + "x" + std::to_string(w));
  }
  std::vector<Vec2> data(static_cast<std::size_t>(h) * w);
  for (Vec2& v : data) {
    v.x = std::bit_cast<float>(get_u32(in));
    v.y = std::bit_cast<float>(get_u32(in));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw IoError("wfld: trailing bytes after flow data");
  return FlowField(static_cast<int>(h), static_cast<int>(w), std::move(data));
}

void write_wfld(const FlowField& flow, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path.string());
  write_wfld(flow, out);
}

FlowField read_wfld(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_wfld(in);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const FitReport& report) {
  json traj = json::array();
  for (double v : report.trajectory) traj.push_back(finite_or_null(v));
  return json{{"trajectory", traj},
              {"best_loss", finite_or_null(report.best_loss)},
              {"best_iteration", report.best_iteration},
              {"psnr_db", finite_or_null(report.psnr)},
              {"psnr_infinite", std::isinf(report.psnr)},
              {"points", control_points_to_json(report.control)}};
}

json to_json(const GradientReport& r) {
  return json{{"seed", r.seed},         {"height", r.height},
              {"width", r.width},       {"k", r.k},
              {"max_rel_error", r.max_rel_error}, {"max_abs_error", r.max_abs_error},
              {"checked", r.checked},   {"skipped", r.skipped},
              {"masked_pixels", r.masked_pixels}, {"pass", r.pass}};
}

}  // namespace warpkit
