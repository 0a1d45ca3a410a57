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

#include "supmt/adaptive.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "supmt/normal.h"
#include "supmt/privacy.h"
#include "supmt/transform.h"

namespace supmt {
namespace {

// Sub-stream ids; the peeling stream is disjoint from the estimator noise.
constexpr uint64_t kEstimatorStream = 0x657374;  // "est"
constexpr uint64_t kPeelingStream = 0x70656c;    // "pel"

absl::Status CheckTau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tau must lie in (0, 1), got ", tau));
  }
  return absl::OkStatus();
}

absl::Status CheckC0(double c0) {
  if (!(c0 > 0.0 && c0 < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("c0 must lie in (0, 1), got ", c0));
  }
  return absl::OkStatus();
}

// sum_j 1(p_j > tau) (Q(p_j) - Q(tau)).
double ExcessLatentSum(std::span<const double> pvals, double tau) {
  const double q_tau = StdNormalQuantileUnchecked(tau);
  double sum = 0.0;
  for (double p : pvals) {
    if (p > tau) sum += LatentScore(p) - q_tau;
  }
  return sum;
}

size_t ClampPeelCount(double raw, size_t m, size_t m_tilde) {
  const double m_d = static_cast<double>(m);
  // Compare in floating point first; raw can be negative or huge.
  size_t count = raw >= m_d ? m : raw <= 0.0 ? 0 : static_cast<size_t>(raw);
  count = std::max(count, m_tilde);
  return std::min(count, m);
}

}  // namespace

absl::StatusOr<double> ETau(double tau) {
  if (absl::Status s = CheckTau(tau); !s.ok()) return s;
  const double q = StdNormalQuantileUnchecked(tau);
  return StdNormalPdf(q) / (1.0 - tau) - q;
}

absl::StatusOr<double> StoreyPi0(std::span<const double> pvals, double tau) {
  if (absl::Status s = CheckTau(tau); !s.ok()) return s;
  if (pvals.empty()) return absl::InvalidArgumentError("no p-values");
  const auto above = std::count_if(pvals.begin(), pvals.end(),
                                   [tau](double p) { return p > tau; });
  return static_cast<double>(above) /
         (static_cast<double>(pvals.size()) * (1.0 - tau));
}

absl::StatusOr<double> Pi0Bar(std::span<const double> pvals, double tau) {
  absl::StatusOr<double> e_tau = ETau(tau);
  if (!e_tau.ok()) return e_tau.status();
  if (pvals.empty()) return absl::InvalidArgumentError("no p-values");
  const double m = static_cast<double>(pvals.size());
  return ExcessLatentSum(pvals, tau) / (m * (1.0 - tau) * *e_tau);
}

absl::StatusOr<double> Pi0InvBar(std::span<const double> pvals, double tau,
                                 double c0) {
  absl::StatusOr<double> e_tau = ETau(tau);
  if (!e_tau.ok()) return e_tau.status();
  if (absl::Status s = CheckC0(c0); !s.ok()) return s;
  if (pvals.empty()) return absl::InvalidArgumentError("no p-values");
  const double scale =
      static_cast<double>(pvals.size()) * (1.0 - tau) * *e_tau;
  return scale / std::max(ExcessLatentSum(pvals, tau), c0 * scale);
}

absl::StatusOr<double> GsPi0Bar(double gs, double tau) {
  absl::StatusOr<double> e_tau = ETau(tau);
  if (!e_tau.ok()) return e_tau.status();
  if (!(gs >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("gs must be nonnegative, got ", gs));
  }
  return gs / ((1.0 - tau) * *e_tau);
}

absl::StatusOr<double> GsPi0Inv(double gs, double tau, double c0) {
  absl::StatusOr<double> gs_bar = GsPi0Bar(gs, tau);
  if (!gs_bar.ok()) return gs_bar.status();
  if (absl::Status s = CheckC0(c0); !s.ok()) return s;
  return 1.0 / c0 - 1.0 / (c0 + *gs_bar);
}

size_t PeelCountMDagger(double pi0_bar, double noise, size_t m, double c,
                        size_t m_tilde) {
  const double raw =
      std::ceil((1.0 + c) * static_cast<double>(m) * (1.0 - pi0_bar + noise));
  return ClampPeelCount(raw, m, m_tilde);
}

size_t PeelCountMStar(double pi0_hat, size_t m, double c, size_t m_tilde) {
  return PeelCountMDagger(pi0_hat, 0.0, m, c, m_tilde);
}

double Pi0Hat(double pi0_inv, double noise, double c0) {
  return 1.0 / std::clamp(pi0_inv + noise, 1.0, 1.0 / c0);
}

absl::StatusOr<RejectionResult> AdaptiveSupTest(std::span<const double> pvals,
                                                const TestConfig& config,
                                                const AdaptiveConfig& acfg,
                                                const RandomStream& stream) {
  if (absl::Status s = ValidatePValues(pvals); !s.ok()) return s;
  if (absl::Status s = CheckTau(acfg.tau); !s.ok()) return s;
  if (absl::Status s = CheckC0(acfg.c0); !s.ok()) return s;
  if (!(acfg.tau > config.alpha)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "tau (", acfg.tau, ") must exceed alpha (", config.alpha, ")"));
  }
  if (acfg.m_tilde == 0) {
    return absl::InvalidArgumentError("minimum peeling number must be >= 1");
  }
  const double c = acfg.Inflation(config.alpha);
  if (!(c >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("inflation c must be nonnegative, got ", c));
  }
  if (config.noise != NoiseKind::kGaussian || !config.budget.is_gdp()) {
    return absl::InvalidArgumentError(
        "adaptive procedures need Gaussian noise and a mu-GDP budget");
  }
  absl::StatusOr<BudgetSplit> split =
      SplitBudget(config.budget.gdp().mu, acfg.rho);
  if (!split.ok()) return split.status();

  const size_t m = pvals.size();
  RandomStream estimator_stream = stream.Split(kEstimatorStream);
  AdaptiveInfo info;
  info.mu_estimator = split->mu_estimator;
  info.mu_peeling = split->mu_peeling;
  double threshold_scale = 1.0;

  if (acfg.mode == AdaptiveConfig::Mode::kJoint) {
    absl::StatusOr<double> pi0_inv = Pi0InvBar(pvals, acfg.tau, acfg.c0);
    if (!pi0_inv.ok()) return pi0_inv.status();
    double sigma_tau = 0.0;
    if (acfg.estimator_sigma_override.has_value()) {
      sigma_tau = *acfg.estimator_sigma_override;
    } else {
      absl::StatusOr<double> gs = GsPi0Inv(config.gs, acfg.tau, acfg.c0);
      if (!gs.ok()) return gs.status();
      sigma_tau = *gs / split->mu_estimator;
    }
    const double noise =
        DrawNoise(estimator_stream, sigma_tau, NoiseKind::kGaussian);
    info.pi0_hat = Pi0Hat(*pi0_inv, noise, acfg.c0);
    info.peel_count = PeelCountMStar(info.pi0_hat, m, c, acfg.m_tilde);
    if (config.family == Family::kBH || config.family == Family::kBonferroni) {
      threshold_scale = 1.0 / info.pi0_hat;
    }
  } else {
    absl::StatusOr<double> pi0_bar = Pi0Bar(pvals, acfg.tau);
    if (!pi0_bar.ok()) return pi0_bar.status();
    double sigma = 0.0;
    if (acfg.estimator_sigma_override.has_value()) {
      sigma = *acfg.estimator_sigma_override;
    } else {
      absl::StatusOr<double> gs = GsPi0Bar(config.gs, acfg.tau);
      if (!gs.ok()) return gs.status();
      sigma = *gs / split->mu_estimator;
    }
    const double noise =
        DrawNoise(estimator_stream, sigma, NoiseKind::kGaussian);
    info.pi0_hat = std::clamp(*pi0_bar - noise, 0.0, 1.0);
    info.peel_count = PeelCountMDagger(*pi0_bar, noise, m, c, acfg.m_tilde);
  }

  TestConfig inner = config;
  inner.m_peel = info.peel_count;
  inner.budget = *PrivacyBudget::Gdp(split->mu_peeling);
  inner.pi0_inv_scale = threshold_scale;
  absl::StatusOr<RejectionResult> result =
      SupTest(pvals, inner, stream.Split(kPeelingStream));
  if (result.ok()) result->adaptive = info;
  return result;
}

absl::StatusOr<RejectionResult> AdaptiveSupTest(std::span<const double> pvals,
                                                const TestConfig& config,
                                                const AdaptiveConfig& acfg) {
  return AdaptiveSupTest(pvals, config, acfg,
                         RandomStream(config.seed, config.stream_id));
}

}  // namespace supmt
