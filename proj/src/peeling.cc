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

#include "supmt/peeling.h"

#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace supmt {
namespace {

constexpr size_t kNone = std::numeric_limits<size_t>::max();

absl::Status CheckPeelCount(size_t m_peel, size_t m) {
  if (m_peel == 0) {
    return absl::InvalidArgumentError("peeling number must be at least 1");
  }
  if (m_peel > m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "peeling number ", m_peel, " exceeds the number of hypotheses ", m));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PeelOutcome> ReversedPeel(const NoisyMatrix& matrix) {
  if (matrix.num_rows() < 2) {
    return absl::InvalidArgumentError(
        "ReversedPeel: matrix needs an inference row and at least one "
        "peeling row");
  }
  const size_t m = matrix.num_cols();
  const size_t m_peel = matrix.peel_count();
  if (absl::Status s = CheckPeelCount(m_peel, m); !s.ok()) return s;

  std::vector<bool> removed(m, false);
  PeelOutcome out;
  out.peeled_indices.reserve(m_peel);
  out.inference_pvals.reserve(m_peel);
  for (size_t k = 1; k <= m_peel; ++k) {
    std::span<const double> row = matrix.row(k);
    size_t best = kNone;
    for (size_t j = 0; j < m; ++j) {
      if (removed[j]) continue;
      if (best == kNone || row[j] < row[best]) best = j;
    }
    removed[best] = true;
    out.peeled_indices.push_back(best);
    out.inference_pvals.push_back(matrix.at(0, best));
  }
  return out;
}

absl::StatusOr<PeelOutcome> ReversedPeelFromPValues(
    std::span<const double> pvals, size_t m_peel, const NoiseScales& scales,
    const RandomStream& stream, NoiseKind kind) {
  const size_t m = pvals.size();
  if (m == 0) return absl::InvalidArgumentError("no p-values");
  if (absl::Status s = CheckPeelCount(m_peel, m); !s.ok()) return s;

  std::vector<double> latent(m);
  for (size_t j = 0; j < m; ++j) latent[j] = LatentScore(pvals[j]);

  std::vector<bool> removed(m, false);
  PeelOutcome out;
  out.peeled_indices.reserve(m_peel);
  for (size_t k = 1; k <= m_peel; ++k) {
    RandomStream row_stream = stream.Split(k);
    size_t best = kNone;
    double best_score = 0.0;
    for (size_t j = 0; j < m; ++j) {
      // Every column draws, peeled or not, to stay in step with the matrix.
      const double score = latent[j] + DrawNoise(row_stream, scales.sigma1, kind);
      if (removed[j]) continue;
      if (best == kNone || score < best_score) {
        best = j;
        best_score = score;
      }
    }
    removed[best] = true;
    out.peeled_indices.push_back(best);
  }

  RandomStream row_stream = stream.Split(0);
  std::vector<double> row0(m);
  for (size_t j = 0; j < m; ++j) {
    const double z = DrawNoise(row_stream, scales.sigma0, kind);
    row0[j] = NoisyPValue(pvals[j], latent[j], scales.sigma0, z, kind);
  }
  out.inference_pvals.reserve(m_peel);
  for (size_t j : out.peeled_indices) out.inference_pvals.push_back(row0[j]);
  return out;
}

absl::StatusOr<std::vector<ForwardPeel>> ForwardPeelBaseline(
    std::span<const double> log_pvals, size_t m_peel, double laplace_scale,
    const RandomStream& stream) {
  if (!(laplace_scale > 0.0) || !std::isfinite(laplace_scale)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ForwardPeelBaseline: Laplace scale must be positive, got ",
        laplace_scale));
  }
  const size_t m = log_pvals.size();
  if (m == 0) return absl::InvalidArgumentError("no p-values");
  if (absl::Status s = CheckPeelCount(m_peel, m); !s.ok()) return s;

  // Survivors are kept compact and in increasing index order so that ties
  // resolve to the smaller index.
  std::vector<size_t> survivors(m);
  for (size_t j = 0; j < m; ++j) survivors[j] = j;

  std::vector<ForwardPeel> out;
  out.reserve(m_peel);
  for (size_t k = 1; k <= m_peel; ++k) {
    RandomStream round_stream = stream.Split(k);
    size_t best_pos = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (size_t pos = 0; pos < survivors.size(); ++pos) {
      const double value =
          log_pvals[survivors[pos]] + round_stream.Laplace(laplace_scale);
      if (value < best_value) {
        best_value = value;
        best_pos = pos;
      }
    }
    out.push_back({survivors[best_pos], best_value});
    survivors.erase(survivors.begin() + static_cast<ptrdiff_t>(best_pos));
  }
  return out;
}

}  // namespace supmt
