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

#include "supmt/baselines.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "supmt/sup_test.h"

namespace supmt {
namespace {

absl::Status CheckAlpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1), got ", alpha));
  }
  return absl::OkStatus();
}

absl::Status CheckDworkParams(const DworkParams& p) {
  if (!(p.eta > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("eta must be positive, got ", p.eta));
  }
  if (!(p.nu > 0.0 && p.nu < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("nu must lie in (0, 1), got ", p.nu));
  }
  if (!(p.eps > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", p.eps));
  }
  if (!(p.delta > 0.0 && p.delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1), got ", p.delta));
  }
  if (p.laplace_scale.has_value() && !(*p.laplace_scale > 0.0)) {
    return absl::InvalidArgumentError("Laplace scale must be positive");
  }
  return absl::OkStatus();
}

std::vector<size_t> SortedOrder(std::span<const double> pvals) {
  std::vector<size_t> order(pvals.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return pvals[a] < pvals[b]; });
  return order;
}

std::vector<size_t> IndicesWhere(std::span<const double> pvals,
                                 auto predicate) {
  std::vector<size_t> out;
  for (size_t j = 0; j < pvals.size(); ++j) {
    if (predicate(pvals[j])) out.push_back(j);
  }
  return out;
}

// Largest k with p_(k) <= slope * k; rejects every p <= p_(k).
std::vector<size_t> LinearStepUp(std::span<const double> pvals, double slope) {
  const std::vector<size_t> order = SortedOrder(pvals);
  for (size_t k = order.size(); k >= 1; --k) {
    const double cutoff = pvals[order[k - 1]];
    if (cutoff <= slope * static_cast<double>(k)) {
      return IndicesWhere(pvals, [cutoff](double p) { return p <= cutoff; });
    }
  }
  return {};
}

std::vector<size_t> HolmStepDown(std::span<const double> pvals, double alpha) {
  const std::vector<size_t> order = SortedOrder(pvals);
  const double m = static_cast<double>(pvals.size());
  for (size_t i = 1; i <= order.size(); ++i) {
    const double p = pvals[order[i - 1]];
    if (p > alpha / (m - static_cast<double>(i) + 1.0)) {
      return IndicesWhere(pvals, [p](double q) { return q < p; });
    }
  }
  std::vector<size_t> all(pvals.size());
  std::iota(all.begin(), all.end(), size_t{0});
  return all;
}

std::vector<double> TruncatedLogs(std::span<const double> pvals, double nu) {
  std::vector<double> logs(pvals.size());
  for (size_t j = 0; j < pvals.size(); ++j) {
    logs[j] = std::log(std::max(pvals[j], nu));
  }
  return logs;
}

}  // namespace

absl::StatusOr<std::vector<size_t>> ClassicProcedure(
    std::span<const double> pvals, Family family, double alpha) {
  if (absl::Status s = ValidatePValues(pvals); !s.ok()) return s;
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  const double m = static_cast<double>(pvals.size());
  switch (family) {
    case Family::kBH:
      return LinearStepUp(pvals, alpha / m);
    case Family::kBY: {
      double harmonic = 0.0;
      for (size_t l = 1; l <= pvals.size(); ++l) harmonic += 1.0 / l;
      return LinearStepUp(pvals, alpha / (m * harmonic));
    }
    case Family::kBonferroni:
      return IndicesWhere(pvals, [&](double p) { return p <= alpha / m; });
    case Family::kHolm:
      return HolmStepDown(pvals, alpha);
  }
  return absl::InternalError("unknown family");
}

double DpBhPenalty(const DworkParams& params, double alpha) {
  const double k = static_cast<double>(params.m_peel);
  return params.eta *
         std::sqrt(10.0 * k * std::log(1.0 / params.delta) *
                   std::log(6.0 * k / alpha)) /
         params.eps;
}

double DpBonfPenalty(const DworkParams& params, double alpha, size_t m) {
  const double md = static_cast<double>(m);
  return params.eta *
         std::sqrt(10.0 * md * std::log(1.0 / params.delta) *
                   std::log(5.0 * md / alpha)) /
         (2.0 * params.eps);
}

double DpBhLaplaceScale(const DworkParams& params) {
  if (params.laplace_scale.has_value()) return *params.laplace_scale;
  return params.eta *
         std::sqrt(10.0 * static_cast<double>(params.m_peel) *
                   std::log(1.0 / params.delta)) /
         params.eps;
}

double DpBonfLaplaceScale(const DworkParams& params, size_t m) {
  if (params.laplace_scale.has_value()) return *params.laplace_scale;
  return params.eta *
         std::sqrt(10.0 * static_cast<double>(m) *
                   std::log(1.0 / params.delta)) /
         (2.0 * params.eps);
}

absl::StatusOr<DpResult> DpBh(std::span<const double> pvals,
                              const DworkParams& params, double alpha,
                              const RandomStream& stream) {
  if (absl::Status s = ValidatePValues(pvals); !s.ok()) return s;
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  if (absl::Status s = CheckDworkParams(params); !s.ok()) return s;

  DpResult result;
  result.laplace_scale = DpBhLaplaceScale(params);
  result.penalty = DpBhPenalty(params, alpha);
  absl::StatusOr<std::vector<ForwardPeel>> peeled =
      ForwardPeelBaseline(TruncatedLogs(pvals, params.nu), params.m_peel,
                          result.laplace_scale, stream);
  if (!peeled.ok()) return peeled.status();
  result.peeled = *std::move(peeled);

  std::vector<ForwardPeel> sorted = result.peeled;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ForwardPeel& a, const ForwardPeel& b) {
                     return a.noisy_log_p < b.noisy_log_p;
                   });
  const double m = static_cast<double>(pvals.size());
  for (size_t j = sorted.size(); j >= 1; --j) {
    const double threshold =
        std::log(alpha * static_cast<double>(j) / m) - result.penalty;
    if (sorted[j - 1].noisy_log_p <= threshold) {
      result.j_star = j;
      break;
    }
  }
  for (size_t i = 0; i < result.j_star; ++i) {
    result.rejected_indices.push_back(sorted[i].index);
  }
  return result;
}

absl::StatusOr<DpResult> DpBonf(std::span<const double> pvals,
                                const DworkParams& params, double alpha,
                                const RandomStream& stream) {
  if (absl::Status s = ValidatePValues(pvals); !s.ok()) return s;
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  if (absl::Status s = CheckDworkParams(params); !s.ok()) return s;

  const size_t m = pvals.size();
  DpResult result;
  result.laplace_scale = DpBonfLaplaceScale(params, m);
  result.penalty = DpBonfPenalty(params, alpha, m);
  absl::StatusOr<std::vector<ForwardPeel>> peeled = ForwardPeelBaseline(
      TruncatedLogs(pvals, params.nu), m, result.laplace_scale, stream);
  if (!peeled.ok()) return peeled.status();
  result.peeled = *std::move(peeled);

  const double threshold =
      std::log(alpha / static_cast<double>(m)) - result.penalty;
  std::vector<ForwardPeel> sorted = result.peeled;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ForwardPeel& a, const ForwardPeel& b) {
                     return a.noisy_log_p < b.noisy_log_p;
                   });
  for (const ForwardPeel& peel : sorted) {
    if (peel.noisy_log_p > threshold) break;
    result.rejected_indices.push_back(peel.index);
  }
  result.j_star = result.rejected_indices.size();
  return result;
}

bool PowerDominanceCondition(const DworkParams& params, double alpha, size_t m,
                             DpVariant variant) {
  const double log_inv_delta = std::log(1.0 / params.delta);
  if (variant == DpVariant::kBH) {
    const double k = static_cast<double>(params.m_peel);
    const double lhs =
        params.eta * std::sqrt(10.0 * k * log_inv_delta) / params.eps;
    return lhs <= 1.0 - 1.0 / std::log(6.0 * k / alpha);
  }
  const double md = static_cast<double>(m);
  const double lhs =
      0.5 * params.eta * std::sqrt(10.0 * md * log_inv_delta) / params.eps;
  return lhs <= 1.0 - 1.0 / std::log(5.0 * md / alpha);
}

}  // namespace supmt
