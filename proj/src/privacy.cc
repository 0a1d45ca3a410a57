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

#include "supmt/privacy.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "supmt/normal.h"

namespace supmt {
namespace {

bool IsPositive(double x) { return x > 0.0 && std::isfinite(x); }

absl::Status CheckApproxDp(double eps, double delta) {
  if (!IsPositive(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", eps));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PrivacyBudget> PrivacyBudget::Gdp(double mu) {
  if (!IsPositive(mu)) {
    return absl::InvalidArgumentError(
        absl::StrCat("mu must be positive, got ", mu));
  }
  return PrivacyBudget(GdpBudget{mu});
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::ApproxDp(double eps,
                                                      double delta) {
  if (absl::Status s = CheckApproxDp(eps, delta); !s.ok()) return s;
  return PrivacyBudget(ApproxDpBudget{eps, delta});
}

std::string PrivacyBudget::ToString() const {
  if (is_gdp()) return absl::StrCat("mu=", gdp().mu);
  return absl::StrCat("eps=", approx_dp().eps, ",delta=", approx_dp().delta);
}

absl::StatusOr<double> GdpCompose(double mu1, double mu2) {
  if (!(mu1 >= 0.0) || !(mu2 >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("GdpCompose: inputs must be nonnegative, got ", mu1,
                     " and ", mu2));
  }
  return std::hypot(mu1, mu2);
}

absl::StatusOr<double> GdpToApproxDpDelta(double mu, double eps) {
  if (!IsPositive(mu) || !IsPositive(eps)) {
    return absl::InvalidArgumentError(
        absl::StrCat("GdpToApproxDpDelta: mu and eps must be positive, got mu=",
                     mu, " eps=", eps));
  }
  const double a = -eps / mu + 0.5 * mu;
  const double b = -eps / mu - 0.5 * mu;
  const double delta = StdNormalCdf(a) - std::exp(eps + LogStdNormalCdf(b));
  return std::max(delta, 0.0);
}

absl::StatusOr<double> ExperimentMu(double eps, double delta) {
  if (absl::Status s = CheckApproxDp(eps, delta); !s.ok()) return s;
  return 4.0 * eps / std::sqrt(10.0 * std::log(1.0 / delta));
}

absl::StatusOr<NoiseScales> CalibratePeelingScales(double mu, double gs,
                                                   size_t m_peel) {
  if (!IsPositive(mu) || !IsPositive(gs)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "CalibratePeelingScales: mu and gs must be positive, got mu=", mu,
        " gs=", gs));
  }
  if (m_peel == 0) {
    return absl::InvalidArgumentError(
        "CalibratePeelingScales: peeling number must be at least 1");
  }
  const double sigma0 = std::sqrt(2.0 * static_cast<double>(m_peel)) * gs / mu;
  return NoiseScales{sigma0, 2.0 * sigma0};
}

absl::StatusOr<NoiseScales> CalibrateLaplacePeelingScales(double eps,
                                                          double delta,
                                                          double gs,
                                                          size_t m_peel) {
  if (absl::Status s = CheckApproxDp(eps, delta); !s.ok()) return s;
  if (!IsPositive(gs)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "CalibrateLaplacePeelingScales: gs must be positive, got ", gs));
  }
  if (m_peel == 0) {
    return absl::InvalidArgumentError(
        "CalibrateLaplacePeelingScales: peeling number must be at least 1");
  }
  const double b1 = 2.0 *
                    std::sqrt(2.0 * static_cast<double>(m_peel) *
                              std::log(1.0 / delta)) *
                    gs / eps;
  return NoiseScales{0.5 * b1, b1};
}

absl::StatusOr<BudgetSplit> SplitBudget(double mu, double rho) {
  if (!IsPositive(mu)) {
    return absl::InvalidArgumentError(
        absl::StrCat("SplitBudget: mu must be positive, got ", mu));
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("SplitBudget: rho must lie in (0, 1), got ", rho));
  }
  return BudgetSplit{mu * std::sqrt(rho), mu * std::sqrt(1.0 - rho)};
}

}  // namespace supmt
