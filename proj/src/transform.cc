//
// Copyright 2026 The supmt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "supmt/transform.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "supmt/normal.h"

namespace supmt {
namespace {

// Noisy p-values live strictly inside (0, 1) even where Phi saturates.
double ClampOpenUnit(double p) {
  constexpr double kLow = std::numeric_limits<double>::min();
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  return std::clamp(p, kLow, kHigh);
}

}  // namespace

double ClampPValue(double p) {
  return std::clamp(p, kPValueFloor, 1.0 - kPValueFloor);
}

double LatentScore(double p) {
  return StdNormalQuantileUnchecked(ClampPValue(p));
}

absl::StatusOr<Transform> Transform::Create(double gs, Kind kind) {
  if (!(gs > 0.0) || !std::isfinite(gs)) {
    return absl::InvalidArgumentError(
        absl::StrCat("global sensitivity must be positive, got ", gs));
  }
  return Transform(kind, gs);
}

double NoisyPValue(double p, double latent, double scale, double z,
                   NoiseKind kind) {
  if (scale == 0.0) return ClampPValue(p);
  if (kind == NoiseKind::kGaussian) {
    return ClampOpenUnit(
        StdNormalCdf((latent + z) / std::sqrt(1.0 + scale * scale)));
  }
  return ClampOpenUnit(NormalLaplaceCdfUnchecked(latent + z, scale));
}

double NoisyPGaussian(double p, double sigma, double z) {
  if (sigma == 0.0 && z == 0.0) return ClampPValue(p);
  return ClampOpenUnit(StdNormalCdf((LatentScore(p) + z) /
                                    std::sqrt(1.0 + sigma * sigma)));
}

absl::StatusOr<double> NoisyPLaplace(double p, double b, double z) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NoisyPLaplace: scale must be positive, got ", b));
  }
  return ClampOpenUnit(NormalLaplaceCdfUnchecked(LatentScore(p) + z, b));
}

double DrawNoise(RandomStream& stream, double scale, NoiseKind kind) {
  if (scale == 0.0) return 0.0;
  return kind == NoiseKind::kGaussian ? scale * stream.Normal()
                                      : stream.Laplace(scale);
}

absl::StatusOr<NoisyMatrix> GenerateNoisyMatrix(std::span<const double> pvals,
                                                size_t m_peel,
                                                const NoiseScales& scales,
                                                const RandomStream& stream,
                                                NoiseKind kind) {
  if (pvals.empty()) {
    return absl::InvalidArgumentError("GenerateNoisyMatrix: no p-values");
  }
  if (m_peel == 0) {
    return absl::InvalidArgumentError(
        "GenerateNoisyMatrix: peeling number must be at least 1");
  }
  if (!(scales.sigma0 >= 0.0) || !(scales.sigma1 >= 0.0)) {
    return absl::InvalidArgumentError(
        "GenerateNoisyMatrix: noise scales must be nonnegative");
  }
  const size_t m = pvals.size();
  std::vector<double> latent(m);
  for (size_t j = 0; j < m; ++j) latent[j] = LatentScore(pvals[j]);

  NoisyMatrix matrix(m_peel + 1, m, scales, kind);
  for (size_t k = 0; k <= m_peel; ++k) {
    const double scale = k == 0 ? scales.sigma0 : scales.sigma1;
    RandomStream row_stream = stream.Split(k);
    std::span<double> row = matrix.mutable_row(k);
    for (size_t j = 0; j < m; ++j) {
      const double z = DrawNoise(row_stream, scale, kind);
      row[j] = NoisyPValue(pvals[j], latent[j], scale, z, kind);
    }
  }
  return matrix;
}

std::vector<double> GenerateInferenceRow(std::span<const double> pvals,
                                         double sigma0,
                                         const RandomStream& stream,
                                         NoiseKind kind) {
  std::vector<double> row(pvals.size());
  RandomStream row_stream = stream.Split(0);
  for (size_t j = 0; j < pvals.size(); ++j) {
    const double z = DrawNoise(row_stream, sigma0, kind);
    row[j] = sigma0 == 0.0
                 ? ClampPValue(pvals[j])
                 : NoisyPValue(pvals[j], LatentScore(pvals[j]), sigma0, z, kind);
  }
  return row;
}

}  // namespace supmt
