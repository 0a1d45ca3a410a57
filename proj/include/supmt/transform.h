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

// Noisy p-values that stay super-uniform.
//
// A raw p-value is mapped to the latent scale with Q = Phi^{-1}, perturbed by
// privacy noise Z, and mapped back through the CDF F of Q(U) + Z, U uniform.
// When p is uniform the result is exactly uniform, and when p is
// super-uniform so is the result.

#ifndef SUPMT_TRANSFORM_H_
#define SUPMT_TRANSFORM_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "supmt/privacy.h"
#include "supmt/random.h"

namespace supmt {

enum class NoiseKind { kGaussian, kLaplace };

// Raw p-values are clamped to [kPValueFloor, 1 - kPValueFloor] before Q.
inline constexpr double kPValueFloor = 1e-15;

double ClampPValue(double p);

// The quantile transform Q(p) = Phi^{-1}(p) applied to a clamped p-value.
double LatentScore(double p);

// Q(p) together with the global sensitivity of Q(p(D)), a caller-supplied
// constant. Only the normal quantile is provided.
class Transform {
 public:
  enum class Kind { kNormalQuantile };

  static absl::StatusOr<Transform> Create(double gs,
                                          Kind kind = Kind::kNormalQuantile);

  Kind kind() const { return kind_; }
  double gs() const { return gs_; }
  double Apply(double p) const { return LatentScore(p); }

 private:
  Transform(Kind kind, double gs) : kind_(kind), gs_(gs) {}

  Kind kind_;
  double gs_;
};

// Phi((Phi^{-1}(p) + z) / sqrt(1 + sigma^2)) where z is a N(0, sigma^2) draw.
// With sigma == 0 and z == 0 the clamped p is returned unchanged.
double NoisyPGaussian(double p, double sigma, double z);

// NormalLaplaceCdf(Phi^{-1}(p) + z, b) where z is a Laplace(0, b) draw.
absl::StatusOr<double> NoisyPLaplace(double p, double b, double z);

// Noisy p-value for either noise kind. `latent` must equal LatentScore(p);
// it is passed in so callers can reuse it across rows. A zero scale returns
// the clamped p unchanged.
double NoisyPValue(double p, double latent, double scale, double z,
                   NoiseKind kind);

// One noise draw at the given scale; consumes nothing when scale == 0.
double DrawNoise(RandomStream& stream, double scale, NoiseKind kind);

// The (1 + m_peel) x m array of noisy p-values. Row 0 is the inference row
// (scale sigma0); rows 1..m_peel are the peeling rows (scale sigma1).
class NoisyMatrix {
 public:
  NoisyMatrix(size_t num_rows, size_t num_cols, NoiseScales scales,
              NoiseKind kind)
      : num_rows_(num_rows),
        num_cols_(num_cols),
        scales_(scales),
        kind_(kind),
        values_(num_rows * num_cols) {}

  size_t num_rows() const { return num_rows_; }
  size_t num_cols() const { return num_cols_; }
  size_t peel_count() const { return num_rows_ == 0 ? 0 : num_rows_ - 1; }
  const NoiseScales& scales() const { return scales_; }
  NoiseKind kind() const { return kind_; }

  std::span<const double> row(size_t k) const {
    return {values_.data() + k * num_cols_, num_cols_};
  }
  std::span<double> mutable_row(size_t k) {
    return {values_.data() + k * num_cols_, num_cols_};
  }
  double at(size_t k, size_t j) const { return values_[k * num_cols_ + j]; }

 private:
  size_t num_rows_;
  size_t num_cols_;
  NoiseScales scales_;
  NoiseKind kind_;
  std::vector<double> values_;
};

// Row k draws its noise, column by column, from stream.Split(k).
absl::StatusOr<NoisyMatrix> GenerateNoisyMatrix(std::span<const double> pvals,
                                                size_t m_peel,
                                                const NoiseScales& scales,
                                                const RandomStream& stream,
                                                NoiseKind kind);

// Row 0 of GenerateNoisyMatrix on its own: the noisy inference p-values.
std::vector<double> GenerateInferenceRow(std::span<const double> pvals,
                                         double sigma0,
                                         const RandomStream& stream,
                                         NoiseKind kind);

}  // namespace supmt

#endif  // SUPMT_TRANSFORM_H_
