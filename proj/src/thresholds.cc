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

#include "supmt/thresholds.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace supmt {

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kBH:
      return "bh";
    case Family::kBY:
      return "by";
    case Family::kBonferroni:
      return "bonf";
    case Family::kHolm:
      return "holm";
  }
  return "unknown";
}

StepRule DefaultStepRule(Family family) {
  return family == Family::kHolm ? StepRule::kStepDown : StepRule::kStepUp;
}

ThresholdFamily::ThresholdFamily(Family kind, double alpha, size_t m,
                                 double pi0_inv_scale, double harmonic)
    : kind_(kind),
      alpha_(alpha),
      m_(m),
      pi0_inv_scale_(pi0_inv_scale),
      harmonic_(harmonic) {}

absl::StatusOr<ThresholdFamily> ThresholdFamily::Create(Family kind,
                                                        double alpha, size_t m,
                                                        double pi0_inv_scale) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1), got ", alpha));
  }
  if (m == 0) {
    return absl::InvalidArgumentError("number of hypotheses must be positive");
  }
  if (!(pi0_inv_scale >= 1.0) || !std::isfinite(pi0_inv_scale)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "threshold scale must be finite and at least 1, got ", pi0_inv_scale));
  }
  double harmonic = 0.0;
  if (kind == Family::kBY) {
    for (size_t l = 1; l <= m; ++l) harmonic += 1.0 / static_cast<double>(l);
  }
  return ThresholdFamily(kind, alpha, m, pi0_inv_scale, harmonic);
}

double ThresholdFamily::operator()(size_t j) const {
  const double m = static_cast<double>(m_);
  const double jd = static_cast<double>(j);
  double lambda = 0.0;
  switch (kind_) {
    case Family::kBH:
      lambda = alpha_ * jd / m;
      break;
    case Family::kBY:
      lambda = alpha_ * jd / (m * harmonic_);
      break;
    case Family::kBonferroni:
      lambda = alpha_ / m;
      break;
    case Family::kHolm:
      lambda = alpha_ / (m + 1.0 - jd);
      break;
  }
  return lambda * pi0_inv_scale_;
}

std::vector<double> ThresholdFamily::Values(size_t count) const {
  std::vector<double> out(count);
  for (size_t j = 1; j <= count; ++j) out[j - 1] = (*this)(j);
  return out;
}

absl::StatusOr<double> ThresholdValue(const ThresholdFamily& family,
                                      size_t j) {
  if (j < 1 || j > family.m()) {
    return absl::OutOfRangeError(absl::StrCat(
        "threshold index ", j, " outside [1, ", family.m(), "]"));
  }
  return family(j);
}

absl::StatusOr<size_t> SelectStep(std::span<const double> sorted_pvals,
                                  const ThresholdFamily& family,
                                  StepRule rule) {
  if (sorted_pvals.size() > family.m()) {
    return absl::InvalidArgumentError(
        absl::StrCat("SelectStep: ", sorted_pvals.size(),
                     " p-values exceed m = ", family.m()));
  }
  if (!std::is_sorted(sorted_pvals.begin(), sorted_pvals.end())) {
    return absl::InvalidArgumentError(
        "SelectStep: p-values must be sorted in nondecreasing order");
  }
  const size_t n = sorted_pvals.size();
  if (rule == StepRule::kStepUp) {
    for (size_t j = n; j >= 1; --j) {
      if (sorted_pvals[j - 1] <= family(j)) return j;
    }
    return 0;
  }
  for (size_t j = 1; j <= n; ++j) {
    if (sorted_pvals[j - 1] > family(j)) return j - 1;
  }
  return n;
}

}  // namespace supmt
