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

#ifndef SUPMT_THRESHOLDS_H_
#define SUPMT_THRESHOLDS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace supmt {

// Rejection threshold families. All are indexed against the full number of
// hypotheses m, whatever the number of peeled p-values.
//   kBH:         alpha j / m
//   kBY:         alpha j / (m * H_m),  H_m = sum_{l <= m} 1 / l
//   kBonferroni: alpha / m
//   kHolm:       alpha / (m + 1 - j)
enum class Family { kBH, kBY, kBonferroni, kHolm };

// The step parameter: step-up scans for the last crossing, step-down stops
// at the first violation.
enum class StepRule { kStepDown = 0, kStepUp = 1 };

std::string_view FamilyName(Family family);

// Step-down for Holm, step-up otherwise.
StepRule DefaultStepRule(Family family);

class ThresholdFamily {
 public:
  // `pi0_inv_scale` multiplies every threshold (adaptive thresholds divide by
  // an estimate of the null proportion). Requires 0 < alpha < 1, m >= 1 and
  // pi0_inv_scale >= 1.
  static absl::StatusOr<ThresholdFamily> Create(Family kind, double alpha,
                                                size_t m,
                                                double pi0_inv_scale = 1.0);

  Family kind() const { return kind_; }
  double alpha() const { return alpha_; }
  size_t m() const { return m_; }
  double pi0_inv_scale() const { return pi0_inv_scale_; }

  // lambda_j for 1 <= j <= m. Unchecked.
  double operator()(size_t j) const;

  // lambda_1 .. lambda_count.
  std::vector<double> Values(size_t count) const;

 private:
  ThresholdFamily(Family kind, double alpha, size_t m, double pi0_inv_scale,
                  double harmonic);

  Family kind_;
  double alpha_;
  size_t m_;
  double pi0_inv_scale_;
  double harmonic_;
};

// Checked lambda_j; errors unless 1 <= j <= m.
absl::StatusOr<double> ThresholdValue(const ThresholdFamily& family, size_t j);

// j* for nondecreasing `sorted_pvals` of length m' <= m.
//   step-up:   the largest j with p_(j) <= lambda_j, or 0;
//   step-down: one less than the first j with p_(j) > lambda_j, or m' when
//              no entry violates.
// j* == 0 means nothing is rejected. Errors on unsorted input.
absl::StatusOr<size_t> SelectStep(std::span<const double> sorted_pvals,
                                  const ThresholdFamily& family, StepRule rule);

}  // namespace supmt

#endif  // SUPMT_THRESHOLDS_H_
