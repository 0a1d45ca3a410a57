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

// Null-proportion estimators with low sensitivity, and the adaptive test that
// uses a private estimate to pick the peeling number and rescale thresholds.
//
// The estimators replace the indicator 1(p > tau) of the classical estimator
// by the continuous 1(p > tau) (Q(p) - Q(tau)), normalised by
// E_tau = E[Q(U) - Q(tau) | U > tau], so a shift of every Q(p_j) by at most
// gs moves them by O(gs).

#ifndef SUPMT_ADAPTIVE_H_
#define SUPMT_ADAPTIVE_H_

#include <cstddef>
#include <optional>
#include <span>

#include "absl/status/statusor.h"
#include "supmt/random.h"
#include "supmt/sup_test.h"

namespace supmt {

struct AdaptiveConfig {
  enum class Mode {
    // Private 1/pi0 estimate drives both m* and the threshold scale.
    kJoint,
    // Private pi0 estimate drives the peeling number only (m-dagger).
    kPeelCountOnly,
  };

  Mode mode = Mode::kJoint;
  // Cutoff, must exceed alpha.
  double tau = 0.5;
  // Peeling-number inflation. Unset means 1 / (1 - alpha) - 1.
  std::optional<double> c;
  // Minimum peeling number.
  size_t m_tilde = 100;
  // Floor on the null proportion, in (0, 1).
  double c0 = 0.5;
  // Share of the squared GDP budget spent on the estimate.
  double rho = 0.1;
  // Replaces the calibrated estimator noise scale (0 for a noiseless run).
  std::optional<double> estimator_sigma_override;

  double Inflation(double alpha) const {
    return c.value_or(1.0 / (1.0 - alpha) - 1.0);
  }
};

// E_tau for Q = Phi^{-1}: phi(Phi^{-1}(tau)) / (1 - tau) - Phi^{-1}(tau).
absl::StatusOr<double> ETau(double tau);

// Storey's estimator: #{p_j > tau} / (m (1 - tau)).
absl::StatusOr<double> StoreyPi0(std::span<const double> pvals, double tau);

// sum_j 1(p_j > tau) (Q(p_j) - Q(tau)) / (m (1 - tau) E_tau).
absl::StatusOr<double> Pi0Bar(std::span<const double> pvals, double tau);

// m (1 - tau) E_tau / max{sum_j 1(p_j > tau) (Q(p_j) - Q(tau)),
//                         c0 m (1 - tau) E_tau}; at most 1 / c0.
absl::StatusOr<double> Pi0InvBar(std::span<const double> pvals, double tau,
                                 double c0);

// Global sensitivity of Pi0Bar when a neighbouring dataset moves every
// Q(p_j) by at most gs: gs / ((1 - tau) E_tau).
absl::StatusOr<double> GsPi0Bar(double gs, double tau);

// Global sensitivity of Pi0InvBar:
// 1 / c0 - 1 / (c0 + gs / ((1 - tau) E_tau)).
absl::StatusOr<double> GsPi0Inv(double gs, double tau, double c0);

// max{ceil((1 + c) m (1 - pi0_bar + noise)), m_tilde}, capped at m.
size_t PeelCountMDagger(double pi0_bar, double noise, size_t m, double c,
                        size_t m_tilde);

// max{ceil((1 + c) m (1 - pi0_hat)), m_tilde}, capped at m.
size_t PeelCountMStar(double pi0_hat, size_t m, double c, size_t m_tilde);

// (pi0_inv + noise) clamped to [1, 1 / c0], then inverted. In [c0, 1].
double Pi0Hat(double pi0_inv, double noise, double c0);

// Releases the estimate with budget mu sqrt(rho), then runs SupTest with the
// adaptive peeling number, budget mu sqrt(1 - rho) and, for the BH and
// Bonferroni families, thresholds divided by the estimate. config.m_peel is
// ignored. Requires Gaussian noise and a GDP budget.
absl::StatusOr<RejectionResult> AdaptiveSupTest(std::span<const double> pvals,
                                                const TestConfig& config,
                                                const AdaptiveConfig& acfg,
                                                const RandomStream& stream);

absl::StatusOr<RejectionResult> AdaptiveSupTest(std::span<const double> pvals,
                                                const TestConfig& config,
                                                const AdaptiveConfig& acfg);

}  // namespace supmt

#endif  // SUPMT_ADAPTIVE_H_
