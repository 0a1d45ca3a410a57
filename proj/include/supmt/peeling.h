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

#ifndef SUPMT_PEELING_H_
#define SUPMT_PEELING_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "supmt/random.h"
#include "supmt/transform.h"

namespace supmt {

// Indices released by peeling, in peel order, with their inference-row
// values. Indices are 0-based column numbers.
struct PeelOutcome {
  std::vector<size_t> peeled_indices;
  std::vector<double> inference_pvals;
};

// Reversed peeling over a fully generated noisy matrix. Round k (1-based)
// removes the surviving index with the smallest row-k value; ties go to the
// smaller index.
absl::StatusOr<PeelOutcome> ReversedPeel(const NoisyMatrix& matrix);

// Reversed peeling without materializing the peeling rows.
//
// Because F is strictly increasing, the argmin of row k equals the argmin of
// Q(p_j) + Z_j^(k), so the peeling rows are never mapped back to the
// probability scale. Draws are consumed exactly as GenerateNoisyMatrix
// consumes them (row k from stream.Split(k), every column in order), so the
// result agrees with ReversedPeel(GenerateNoisyMatrix(...)) on the same
// stream.
absl::StatusOr<PeelOutcome> ReversedPeelFromPValues(
    std::span<const double> pvals, size_t m_peel, const NoiseScales& scales,
    const RandomStream& stream, NoiseKind kind);

// One record of the forward peeling baseline.
struct ForwardPeel {
  size_t index;
  double noisy_log_p;
};

// Forward peeling on log p-values: each round adds fresh Laplace noise to
// every surviving log p-value, releases the minimizer and records the noisy
// value it won with.
absl::StatusOr<std::vector<ForwardPeel>> ForwardPeelBaseline(
    std::span<const double> log_pvals, size_t m_peel, double laplace_scale,
    const RandomStream& stream);

}  // namespace supmt

#endif  // SUPMT_PEELING_H_
