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

// Comparators: the textbook non-private procedures, and the forward-peeling
// private BH and Bonferroni procedures that add Laplace noise to log
// p-values and pay for it with privacy-dependent thresholds.

#ifndef SUPMT_BASELINES_H_
#define SUPMT_BASELINES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "supmt/peeling.h"
#include "supmt/random.h"
#include "supmt/thresholds.h"

namespace supmt {

// Textbook procedure on raw p-values. Returns rejected indices in increasing
// index order.
absl::StatusOr<std::vector<size_t>> ClassicProcedure(
    std::span<const double> pvals, Family family, double alpha);

struct DworkParams {
  // Multiplicative sensitivity of the p-values.
  double eta = 1e-4;
  // Truncation: raw p-values are floored at nu before taking logs.
  double nu = 1e-5;
  double eps = 0.5;
  double delta = 1e-3;
  size_t m_peel = 200;
  // Replaces the default Laplace scale of the forward peeling.
  std::optional<double> laplace_scale;
};

struct DpResult {
  std::vector<ForwardPeel> peeled;
  // Threshold shift subtracted from log(lambda_j).
  double penalty = 0.0;
  double laplace_scale = 0.0;
  size_t j_star = 0;
  std::vector<size_t> rejected_indices;
};

// eta sqrt(10 m' log(1/delta) log(6 m' / alpha)) / eps.
double DpBhPenalty(const DworkParams& params, double alpha);

// eta sqrt(10 m log(1/delta) log(5 m / alpha)) / (2 eps).
double DpBonfPenalty(const DworkParams& params, double alpha, size_t m);

// Default forward-peeling Laplace scales: eta sqrt(10 m' log(1/delta)) / eps
// for DP-BH and eta sqrt(10 m log(1/delta)) / (2 eps) for DP-Bonf.
double DpBhLaplaceScale(const DworkParams& params);
double DpBonfLaplaceScale(const DworkParams& params, size_t m);

// Forward-peels m' noisy log p-values, then steps up against
// log(alpha j / m) - DpBhPenalty for j = 1..m'.
absl::StatusOr<DpResult> DpBh(std::span<const double> pvals,
                              const DworkParams& params, double alpha,
                              const RandomStream& stream);

// Forward-peels all m noisy log p-values and rejects those at or below
// log(alpha / m) - DpBonfPenalty. params.m_peel is not used.
absl::StatusOr<DpResult> DpBonf(std::span<const double> pvals,
                                const DworkParams& params, double alpha,
                                const RandomStream& stream);

enum class DpVariant { kBH, kBonferroni };

// Whether the privacy parameters satisfy the condition under which the
// reversed-peeling test with Laplace noise is at least as powerful as the
// forward-peeling comparator:
//   BH:   eta sqrt(10 m' log(1/delta)) / eps       <= 1 - 1 / log(6 m' / alpha)
//   Bonf: eta sqrt(10 m log(1/delta)) / (2 eps)    <= 1 - 1 / log(5 m / alpha)
bool PowerDominanceCondition(const DworkParams& params, double alpha, size_t m,
                             DpVariant variant);

}  // namespace supmt

#endif  // SUPMT_BASELINES_H_
