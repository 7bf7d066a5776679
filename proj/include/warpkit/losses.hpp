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

#include <cstddef>
#include <vector>

#include "warpkit/image.hpp"

namespace warpkit {

/// Objective weights; defaults are the published training values.
struct LossWeights {
  double patch = 2.0;     // lambda_p
  double identity = 1.0;  // lambda_g
  double idt = 10.0;      // lambda_idt
};

/// Row-major n x classes matrix of logits.
class Logits {
 public:
  Logits(std::size_t rows, std::size_t classes, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t classes() const noexcept { return classes_; }
  const double* row(std::size_t i) const { return values_.data() + i * classes_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t rows_;
  std::size_t classes_;
  std::vector<double> values_;
};

/// Per-patch scores in class order (caricature, photo, generated).
class PatchLogits : public Logits {
 public:
  static constexpr std::size_t kCaricature = 0;
  static constexpr std::size_t kPhoto = 1;
  static constexpr std::size_t kGenerated = 2;

  /// h x w x 3 values, patch-major.
  PatchLogits(std::size_t patches, std::vector<double> values) : Logits(patches, 3, std::move(values)) {}
};

/// Per-sample scores over 3M classes: [0, M) real caricatures, [M, 2M)
/// real photos, [2M, 3M) generated caricatures.
class IdentityLogits : public Logits {
 public:
  IdentityLogits(std::size_t samples, std::size_t identities, std::vector<double> values)
      : Logits(samples, 3 * identities, std::move(values)), identities_(identities) {}

  std::size_t identities() const noexcept { return identities_; }

 private:
  std::size_t identities_;
};

/// h x w x c activations, channels interleaved.
using FeatureMap = Image;

/// Per-channel AdaIN targets.
struct StyleParams {
  std::vector<double> mean;
  std::vector<double> scale;  // > 0
};

inline constexpr double kDefaultNormEpsilon = 1e-5;

/// Stable -log softmax(row)[target].
double cross_entropy(const double* logits, std::size_t classes, std::size_t target);

/// Mean cross-entropy over rows, one target per row.
double mean_cross_entropy(const Logits& logits, const std::vector<std::size_t>& targets);

/// Per channel: (f - mean) / sqrt(var + eps) over the h x w plane,
/// population variance.
FeatureMap instance_norm(const FeatureMap& features, double eps = kDefaultNormEpsilon);

/// instance_norm scaled by style.scale and shifted by style.mean.
FeatureMap adain(const FeatureMap& features, const StyleParams& style, double eps = kDefaultNormEpsilon);

/// Mean absolute difference over all samples.
double identity_mapping_loss(const Image& reconstruction, const Image& original);

/// Generator patch loss: mean -log D1 over generated patches.
double patch_adv_loss_generator(const PatchLogits& generated);

/// Discriminator patch loss: caricatures -> D1, photos -> D2,
/// generated -> D3; sum of the three means.
double patch_adv_loss_discriminator(const PatchLogits& caricatures, const PatchLogits& photos,
                                    const PatchLogits& generated);

/// Generator identity loss: generated images classified as class y_p
/// (the real-caricature slot of the photo's identity).
double identity_adv_loss_generator(const IdentityLogits& generated, const std::vector<std::size_t>& photo_labels);

/// Discriminator identity loss with targets y_c, y_p + M and y_p + 2M.
double identity_adv_loss_discriminator(const IdentityLogits& caricatures,
                                       const std::vector<std::size_t>& caricature_labels,
                                       const IdentityLogits& photos,
                                       const std::vector<std::size_t>& photo_labels,
                                       const IdentityLogits& generated,
                                       const std::vector<std::size_t>& generated_labels);

struct GeneratorLossTerms {
  double patch = 0.0;             // L_p^G
  double identity = 0.0;          // L_g^G
  double idt_caricature = 0.0;    // L_idt^c
  double idt_photo = 0.0;         // L_idt^p
};

struct DiscriminatorLossTerms {
  double patch = 0.0;     // L_p^D
  double identity = 0.0;  // L_g^D
};

double total_generator_loss(const GeneratorLossTerms& terms, const LossWeights& weights = {});
double total_discriminator_loss(const DiscriminatorLossTerms& terms, const LossWeights& weights = {});

}  // namespace warpkit
