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

// Privacy budget accounting for Gaussian differential privacy (mu-GDP) and
// approximate (epsilon, delta)-DP, and the noise scales they induce.

#ifndef SUPMT_PRIVACY_H_
#define SUPMT_PRIVACY_H_

#include <cstddef>
#include <string>
#include <utility>
#include <variant>

#include "absl/status/statusor.h"

namespace supmt {

struct GdpBudget {
  double mu;
};

struct ApproxDpBudget {
  double eps;
  double delta;
};

// Either a mu-GDP budget or an (epsilon, delta) pair. Construct through the
// factories, which enforce mu > 0, eps > 0 and 0 < delta < 1.
class PrivacyBudget {
 public:
  static absl::StatusOr<PrivacyBudget> Gdp(double mu);
  static absl::StatusOr<PrivacyBudget> ApproxDp(double eps, double delta);

  bool is_gdp() const { return std::holds_alternative<GdpBudget>(value_); }
  bool is_approx_dp() const { return !is_gdp(); }

  // Precondition: the matching kind.
  const GdpBudget& gdp() const { return std::get<GdpBudget>(value_); }
  const ApproxDpBudget& approx_dp() const {
    return std::get<ApproxDpBudget>(value_);
  }

  // "mu=0.24" or "eps=0.5,delta=0.001".
  std::string ToString() const;

 private:
  explicit PrivacyBudget(std::variant<GdpBudget, ApproxDpBudget> value)
      : value_(value) {}

  std::variant<GdpBudget, ApproxDpBudget> value_;
};

// Standard deviations of the inference-row and peeling-row noise, or the
// Laplace scales when the budget is (epsilon, delta).
struct NoiseScales {
  double sigma0 = 0.0;
  double sigma1 = 0.0;
};

// sqrt(mu1^2 + mu2^2).
absl::StatusOr<double> GdpCompose(double mu1, double mu2);

// Tightest delta such that a mu-GDP mechanism is (eps, delta)-DP.
absl::StatusOr<double> GdpToApproxDpDelta(double mu, double eps);

// The GDP parameter used to match an (eps, delta) budget in the simulation
// study: mu = 4 eps / sqrt(10 log(1 / delta)).
absl::StatusOr<double> ExperimentMu(double eps, double delta);

// Gaussian scales for reversed peeling with m_peel rounds under mu-GDP:
// sigma0 = sqrt(2 m_peel) gs / mu and sigma1 = 2 sigma0.
absl::StatusOr<NoiseScales> CalibratePeelingScales(double mu, double gs,
                                                   size_t m_peel);

// Laplace scales for reversed peeling under (eps, delta)-DP. The peeling rows
// get b = 2 sqrt(2 m_peel log(1 / delta)) gs / eps and the inference row b / 2.
absl::StatusOr<NoiseScales> CalibrateLaplacePeelingScales(double eps,
                                                          double delta,
                                                          double gs,
                                                          size_t m_peel);

struct BudgetSplit {
  double mu_estimator;
  double mu_peeling;
};

// Splits mu so that mu_estimator^2 = rho mu^2 and the two parts compose back
// to mu.
absl::StatusOr<BudgetSplit> SplitBudget(double mu, double rho);

}  // namespace supmt

#endif  // SUPMT_PRIVACY_H_
