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

#include "warpkit/losses.hpp"

#include <cmath>
#include <string>

#include "warpkit/error.hpp"

namespace warpkit {

Logits::Logits(std::size_t rows, std::size_t classes, std::vector<double> values)
    : rows_(rows), classes_(classes), values_(std::move(values)) {
  if (rows_ == 0 || classes_ == 0) throw ShapeError("logits: empty batch or class set");
  if (values_.size() != rows_ * classes_) {
    throw ShapeError("logits: expected " + std::to_string(rows_ * classes_) + " values, got " +
                     std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("logits: non-finite value");
  }
}

double cross_entropy(const double* logits, std::size_t classes, std::size_t target) {
  std::size_t arg = 0;
  for (std::size_t j = 1; j < classes; ++j) {
    if (logits[j] > logits[arg]) arg = j;
  }
  const double peak = logits[arg];
  // log-sum-exp = peak + log1p(sum of the non-peak terms).
  double rest = 0.0;
  for (std::size_t j = 0; j < classes; ++j) {
    if (j != arg) rest += std::exp(logits[j] - peak);
  }
  return peak - logits[target] + std::log1p(rest);
}

double mean_cross_entropy(const Logits& logits, const std::vector<std::size_t>& targets) {
  if (targets.size() != logits.rows()) {
    throw ShapeError("cross entropy: " + std::to_string(logits.rows()) + " rows but " +
                     std::to_string(targets.size()) + " targets");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    if (targets[i] >= logits.classes()) {
      throw LabelError("cross entropy: target " + std::to_string(targets[i]) + " outside " +
                       std::to_string(logits.classes()) + " classes");
    }
    total += cross_entropy(logits.row(i), logits.classes(), targets[i]);
  }
  return total / static_cast<double>(logits.rows());
}

FeatureMap instance_norm(const FeatureMap& f, double eps) {
  if (!(eps > 0.0)) throw ParameterError("instance_norm: epsilon must be positive");
  const std::size_t plane = static_cast<std::size_t>(f.height()) * f.width();
  if (plane < 2) throw ShapeError("instance_norm: spatial plane needs at least 2 samples");
  const int channels = f.channels();
  FeatureMap out(f.height(), f.width(), channels);
  const std::vector<double>& in = f.data();
  for (int c = 0; c < channels; ++c) {
    double mean = 0.0;
    for (std::size_t i = 0; i < plane; ++i) mean += in[i * channels + c];
    mean /= static_cast<double>(plane);
    double var = 0.0;
    for (std::size_t i = 0; i < plane; ++i) {
      const double d = in[i * channels + c] - mean;
      var += d * d;
    }
    var /= static_cast<double>(plane);
    const double inv = 1.0 / std::sqrt(var + eps);
    for (std::size_t i = 0; i < plane; ++i) out.data()[i * channels + c] = (in[i * channels + c] - mean) * inv;
  }
  return out;
}

FeatureMap adain(const FeatureMap& f, const StyleParams& style, double eps) {
  const auto channels = static_cast<std::size_t>(f.channels());
  if (style.mean.size() != channels || style.scale.size() != channels) {
    throw ShapeError("adain: feature map has " + std::to_string(channels) + " channels, style has " +
                     std::to_string(style.mean.size()) + "/" + std::to_string(style.scale.size()));
  }
  for (double s : style.scale) {
    if (!(s > 0.0)) throw ParameterError("adain: style scale must be positive");
  }
  FeatureMap out = instance_norm(f, eps);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t c = i % channels;
    out.data()[i] = style.scale[c] * out.data()[i] + style.mean[c];
  }
  return out;
}

double identity_mapping_loss(const Image& reconstruction, const Image& original) {
  if (!reconstruction.same_shape(original)) throw ShapeError("identity_mapping_loss: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    total += std::abs(reconstruction.data()[i] - original.data()[i]);
  }
  return total / static_cast<double>(original.size());
}

namespace {

std::vector<std::size_t> constant_targets(std::size_t n, std::size_t cls) {
  return std::vector<std::size_t>(n, cls);
}

std::vector<std::size_t> offset_labels(const IdentityLogits& logits, const std::vector<std::size_t>& labels,
                                       std::size_t block) {
  const std::size_t m = logits.identities();
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= m) {
      throw LabelError("identity label " + std::to_string(labels[i]) + " outside [0, " + std::to_string(m) + ")");
    }
    out[i] = labels[i] + block * m;
  }
  return out;
}

}  // namespace

double patch_adv_loss_generator(const PatchLogits& generated) {
  return mean_cross_entropy(generated, constant_targets(generated.rows(), PatchLogits::kCaricature));
}

double patch_adv_loss_discriminator(const PatchLogits& caricatures, const PatchLogits& photos,
                                    const PatchLogits& generated) {
  return mean_cross_entropy(caricatures, constant_targets(caricatures.rows(), PatchLogits::kCaricature)) +
         mean_cross_entropy(photos, constant_targets(photos.rows(), PatchLogits::kPhoto)) +
         mean_cross_entropy(generated, constant_targets(generated.rows(), PatchLogits::kGenerated));
}

double identity_adv_loss_generator(const IdentityLogits& generated, const std::vector<std::size_t>& photo_labels) {
  return mean_cross_entropy(generated, offset_labels(generated, photo_labels, 0));
}

double identity_adv_loss_discriminator(const IdentityLogits& caricatures,
                                       const std::vector<std::size_t>& caricature_labels,
                                       const IdentityLogits& photos,
                                       const std::vector<std::size_t>& photo_labels,
                                       const IdentityLogits& generated,
                                       const std::vector<std::size_t>& generated_labels) {
  if (caricatures.identities() != photos.identities() || photos.identities() != generated.identities()) {
    throw ShapeError("identity_adv_loss_discriminator: batches disagree on identity count");
  }
  return mean_cross_entropy(caricatures, offset_labels(caricatures, caricature_labels, 0)) +
         mean_cross_entropy(photos, offset_labels(photos, photo_labels, 1)) +
         mean_cross_entropy(generated, offset_labels(generated, generated_labels, 2));
}

namespace {

void check_weights(const LossWeights& w) {
  for (double v : {w.patch, w.identity, w.idt}) {
    if (!std::isfinite(v) || v < 0.0) throw ParameterError("loss weights must be finite and non-negative");
  }
}

}  // namespace

double total_generator_loss(const GeneratorLossTerms& t, const LossWeights& w) {
  check_weights(w);
  return w.patch * t.patch + w.identity * t.identity + w.idt * (t.idt_caricature + t.idt_photo);
}

double total_discriminator_loss(const DiscriminatorLossTerms& t, const LossWeights& w) {
  check_weights(w);
  return w.patch * t.patch + w.identity * t.identity;
}

}  // namespace warpkit
