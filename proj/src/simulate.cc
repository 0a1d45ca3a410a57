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

#include "supmt/simulate.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "supmt/baselines.h"
#include "supmt/normal.h"
#include "supmt/privacy.h"

namespace supmt {
namespace {

struct ProcedureEntry {
  Procedure procedure;
  std::string_view name;
};

constexpr ProcedureEntry kProcedures[] = {
    {Procedure::kBH, "bh"},           {Procedure::kBY, "by"},
    {Procedure::kBonf, "bonf"},       {Procedure::kHolm, "holm"},
    {Procedure::kDpBh, "dp-bh"},      {Procedure::kDpBonf, "dp-bonf"},
    {Procedure::kSupBH, "sup-bh"},    {Procedure::kSupBY, "sup-by"},
    {Procedure::kSupBonf, "sup-bonf"}, {Procedure::kSupHolm, "sup-holm"},
    {Procedure::kAsupBH, "asup-bh"},  {Procedure::kAsupBonf, "asup-bonf"},
};

absl::StatusOr<TestConfig> SupConfig(Procedure procedure,
                                     const ProcedureParams& params) {
  TestConfig config;
  config.family = ProcedureFamily(procedure);
  config.alpha = params.alpha;
  config.noise = params.noise;
  config.gs = params.eta;
  config.m_peel = params.m_peel;
  absl::StatusOr<PrivacyBudget> budget;
  if (params.noise == NoiseKind::kGaussian) {
    double mu = 0.0;
    if (params.mu.has_value()) {
      mu = *params.mu;
    } else {
      absl::StatusOr<double> derived = ExperimentMu(params.eps, params.delta);
      if (!derived.ok()) return derived.status();
      mu = *derived;
    }
    budget = PrivacyBudget::Gdp(mu);
  } else {
    budget = PrivacyBudget::ApproxDp(params.eps, params.delta);
  }
  if (!budget.ok()) return budget.status();
  config.budget = *budget;
  return config;
}

MethodOutcome FromRejection(RejectionResult result) {
  MethodOutcome outcome;
  outcome.rejected = result.rejected_indices;
  const PeelOutcome& peeled = result.peeled;
  outcome.released.reserve(peeled.peeled_indices.size());
  for (size_t i = 0; i < peeled.peeled_indices.size(); ++i) {
    outcome.released.emplace_back(peeled.peeled_indices[i],
                                  peeled.inference_pvals[i]);
  }
  outcome.sup = std::move(result);
  return outcome;
}

MethodOutcome FromDp(const DpResult& result) {
  MethodOutcome outcome;
  outcome.rejected = result.rejected_indices;
  outcome.released.reserve(result.peeled.size());
  for (const ForwardPeel& peel : result.peeled) {
    outcome.released.emplace_back(peel.index, std::exp(peel.noisy_log_p));
  }
  return outcome;
}

MetricSummary Summarize(const std::vector<double>& values) {
  MetricSummary summary;
  const double n = static_cast<double>(values.size());
  if (values.empty()) return summary;
  double sum = 0.0;
  for (double v : values) sum += v;
  summary.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - summary.mean) * (v - summary.mean);
    summary.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return summary;
}

// Marks k indices of `pool` chosen uniformly without replacement.
void ChooseSubset(std::vector<size_t>& pool, size_t k, RandomStream& stream,
                  std::vector<uint8_t>& marks) {
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + stream.UniformInt(pool.size() - i);
    std::swap(pool[i], pool[j]);
    marks[pool[i]] = 1;
  }
}

}  // namespace

absl::StatusOr<Procedure> ParseProcedure(std::string_view name) {
  for (const ProcedureEntry& entry : kProcedures) {
    if (entry.name == name) return entry.procedure;
  }
  std::vector<std::string> names;
  for (const ProcedureEntry& entry : kProcedures) names.emplace_back(entry.name);
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown method '", std::string(name), "'; expected one of ",
      absl::StrJoin(names, ", ")));
}

std::string_view ProcedureName(Procedure procedure) {
  for (const ProcedureEntry& entry : kProcedures) {
    if (entry.procedure == procedure) return entry.name;
  }
  return "unknown";
}

std::vector<Procedure> AllProcedures() {
  std::vector<Procedure> out;
  for (const ProcedureEntry& entry : kProcedures) out.push_back(entry.procedure);
  return out;
}

bool IsPrivate(Procedure procedure) {
  return procedure != Procedure::kBH && procedure != Procedure::kBY &&
         procedure != Procedure::kBonf && procedure != Procedure::kHolm;
}

bool IsSup(Procedure procedure) {
  return IsPrivate(procedure) && procedure != Procedure::kDpBh &&
         procedure != Procedure::kDpBonf;
}

bool IsAdaptive(Procedure procedure) {
  return procedure == Procedure::kAsupBH || procedure == Procedure::kAsupBonf;
}

Family ProcedureFamily(Procedure procedure) {
  switch (procedure) {
    case Procedure::kBY:
    case Procedure::kSupBY:
      return Family::kBY;
    case Procedure::kBonf:
    case Procedure::kDpBonf:
    case Procedure::kSupBonf:
    case Procedure::kAsupBonf:
      return Family::kBonferroni;
    case Procedure::kHolm:
    case Procedure::kSupHolm:
      return Family::kHolm;
    default:
      return Family::kBH;
  }
}

absl::StatusOr<MethodOutcome> RunProcedure(Procedure procedure,
                                           const ProcedureParams& params,
                                           std::span<const double> pvals,
                                           const RandomStream& stream) {
  if (!IsPrivate(procedure)) {
    absl::StatusOr<std::vector<size_t>> rejected =
        ClassicProcedure(pvals, ProcedureFamily(procedure), params.alpha);
    if (!rejected.ok()) return rejected.status();
    MethodOutcome outcome;
    outcome.rejected = *std::move(rejected);
    return outcome;
  }
  if (procedure == Procedure::kDpBh || procedure == Procedure::kDpBonf) {
    DworkParams dwork;
    dwork.eta = params.eta;
    dwork.nu = params.nu.value_or(0.5 * params.alpha /
                                  static_cast<double>(pvals.size()));
    dwork.eps = params.eps;
    dwork.delta = params.delta;
    dwork.m_peel = params.m_peel;
    absl::StatusOr<DpResult> result =
        procedure == Procedure::kDpBh
            ? DpBh(pvals, dwork, params.alpha, stream)
            : DpBonf(pvals, dwork, params.alpha, stream);
    if (!result.ok()) return result.status();
    return FromDp(*result);
  }
  absl::StatusOr<TestConfig> config = SupConfig(procedure, params);
  if (!config.ok()) return config.status();
  absl::StatusOr<RejectionResult> result =
      IsAdaptive(procedure)
          ? AdaptiveSupTest(pvals, *config, params.adaptive, stream)
          : SupTest(pvals, *config, stream);
  if (!result.ok()) return result.status();
  return FromRejection(*std::move(result));
}

absl::Status SimScenario::Validate() const {
  std::vector<std::string> problems;
  if (m == 0) problems.push_back("m must be positive");
  if (m1 > m) problems.push_back(absl::StrCat("m1 (", m1, ") exceeds m (", m, ")"));
  if (!std::isfinite(theta_signal)) problems.push_back("theta_signal must be finite");
  if (block_size > 0) {
    if (!(block_rho >= 0.0 && block_rho < 1.0)) {
      problems.push_back(
          absl::StrCat("block_rho must lie in [0, 1), got ", block_rho));
    }
    if (m > 0 && m % block_size != 0) {
      problems.push_back(absl::StrCat("block_size (", block_size,
                                      ") does not divide m (", m, ")"));
    }
  }
  if (reps == 0) problems.push_back("reps must be at least 1");
  if (!(params.alpha > 0.0 && params.alpha < 1.0)) {
    problems.push_back(absl::StrCat("alpha must lie in (0, 1), got ", params.alpha));
  }
  if (!(params.eps > 0.0)) problems.push_back("eps must be positive");
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    problems.push_back("delta must lie in (0, 1)");
  }
  if (params.mu.has_value() && !(*params.mu > 0.0)) {
    problems.push_back("mu must be positive");
  }
  if (!(params.eta > 0.0)) problems.push_back("eta must be positive");
  if (params.nu.has_value() && !(*params.nu > 0.0 && *params.nu < 1.0)) {
    problems.push_back("nu must lie in (0, 1)");
  }
  if (methods.empty()) problems.push_back("no methods configured");
  std::set<std::string> labels;
  for (const MethodSpec& spec : methods) {
    if (!labels.insert(spec.label).second) {
      problems.push_back(absl::StrCat("duplicate method label '", spec.label, "'"));
    }
    const size_t m_peel = spec.m_peel.value_or(params.m_peel);
    if (IsSup(spec.procedure) && !IsAdaptive(spec.procedure) &&
        (m_peel == 0 || m_peel > m)) {
      problems.push_back(absl::StrCat("method '", spec.label,
                                      "': m_peel must lie in [1, m], got ",
                                      m_peel));
    }
    if (spec.procedure == Procedure::kDpBh && (m_peel == 0 || m_peel > m)) {
      problems.push_back(absl::StrCat("method '", spec.label,
                                      "': m_peel must lie in [1, m], got ",
                                      m_peel));
    }
    if (IsAdaptive(spec.procedure) &&
        spec.noise.value_or(params.noise) != NoiseKind::kGaussian) {
      problems.push_back(absl::StrCat(
          "method '", spec.label, "': adaptive methods need Gaussian noise"));
    }
  }
  if (problems.empty()) return absl::OkStatus();
  return absl::InvalidArgumentError(
      absl::StrCat("invalid scenario:\n  ", absl::StrJoin(problems, "\n  ")));
}

absl::StatusOr<GeneratedData> GenPValues(const SimScenario& scenario,
                                         const RandomStream& stream) {
  if (absl::Status s = scenario.Validate(); !s.ok()) return s;
  const size_t m = scenario.m;
  GeneratedData data;
  data.is_signal.assign(m, 0);
  std::vector<double> theta(m, 0.0);

  RandomStream signal_stream = stream.Split(1);
  std::vector<size_t> pool(m);
  std::iota(pool.begin(), pool.end(), size_t{0});
  ChooseSubset(pool, scenario.m1, signal_stream, data.is_signal);
  for (size_t j = 0; j < m; ++j) {
    if (data.is_signal[j]) theta[j] = scenario.theta_signal;
  }

  if (scenario.null_mode == NullMode::kConservative) {
    RandomStream null_stream = stream.Split(3);
    std::vector<size_t> nulls;
    for (size_t j = 0; j < m; ++j) {
      if (!data.is_signal[j]) nulls.push_back(j);
    }
    const auto n_exact = static_cast<size_t>(
        std::llround(0.6 * static_cast<double>(nulls.size())));
    std::vector<uint8_t> exact(m, 0);
    ChooseSubset(nulls, n_exact, null_stream, exact);
    for (size_t j = 0; j < m; ++j) {
      if (!data.is_signal[j] && !exact[j]) {
        theta[j] = null_stream.Uniform(-0.3, 0.0);
      }
    }
  }

  RandomStream stat_stream = stream.Split(2);
  data.pvals.resize(m);
  if (scenario.block_size == 0) {
    for (size_t j = 0; j < m; ++j) {
      data.pvals[j] = StdNormalCdf(stat_stream.Normal() - theta[j]);
    }
  } else {
    const double common = std::sqrt(scenario.block_rho);
    const double own = std::sqrt(1.0 - scenario.block_rho);
    for (size_t start = 0; start < m; start += scenario.block_size) {
      const double z0 = stat_stream.Normal();
      for (size_t j = start; j < start + scenario.block_size; ++j) {
        const double t = common * z0 + own * stat_stream.Normal();
        data.pvals[j] = StdNormalCdf(t - theta[j]);
      }
    }
  }
  return data;
}

GeneratedData GenMixturePValues(size_t m, double omega1, double signal,
                                const RandomStream& stream) {
  GeneratedData data;
  data.pvals.resize(m);
  data.is_signal.resize(m);
  RandomStream label_stream = stream.Split(1);
  RandomStream stat_stream = stream.Split(2);
  for (size_t j = 0; j < m; ++j) {
    data.is_signal[j] = label_stream.Uniform() < omega1 ? 1 : 0;
    const double shift = data.is_signal[j] ? signal : 0.0;
    data.pvals[j] = StdNormalCdf(stat_stream.Normal() - shift);
  }
  return data;
}

ReplicateMetrics ComputeMetrics(std::span<const size_t> rejected,
                                const GeneratedData& data, double tau) {
  const size_t n_signal = static_cast<size_t>(
      std::count(data.is_signal.begin(), data.is_signal.end(), uint8_t{1}));
  size_t false_rejections = 0;
  size_t true_rejections = 0;
  size_t v_tau = 0;
  for (size_t j : rejected) {
    if (data.is_signal[j]) {
      ++true_rejections;
    } else {
      ++false_rejections;
      if (data.pvals[j] > tau) ++v_tau;
    }
  }
  const double r = static_cast<double>(std::max<size_t>(rejected.size(), 1));
  ReplicateMetrics metrics;
  metrics.fdp = static_cast<double>(false_rejections) / r;
  metrics.fwer = false_rejections > 0 ? 1.0 : 0.0;
  metrics.power = static_cast<double>(true_rejections) /
                  static_cast<double>(std::max<size_t>(n_signal, 1));
  metrics.rejections = static_cast<double>(rejected.size());
  metrics.v_tau = static_cast<double>(v_tau);
  metrics.v_tau_fraction = static_cast<double>(v_tau) / r;
  return metrics;
}

const MethodMetrics* MetricsTable::Find(std::string_view label) const {
  for (const MethodMetrics& row : rows) {
    if (row.label == label) return &row;
  }
  return nullptr;
}

std::string MetricsTable::ToCsv() const {
  std::string out = "method,metric,mean,stderr,reps\n";
  for (const MethodMetrics& row : rows) {
    const std::pair<std::string_view, const MetricSummary*> metrics[] = {
        {"fdr", &row.fdr},
        {"fwer", &row.fwer},
        {"power", &row.power},
        {"rejections", &row.rejections},
        {"v_tau", &row.v_tau},
        {"v_tau_fraction", &row.v_tau_fraction},
    };
    for (const auto& [name, summary] : metrics) {
      absl::StrAppendFormat(&out, "%s,%s,%.10g,%.10g,%d\n", row.label,
                            std::string(name),
                            summary->mean, summary->std_error, row.reps);
    }
  }
  return out;
}

absl::StatusOr<MetricsTable> RunReplications(const SimScenario& scenario,
                                             int threads) {
  if (absl::Status s = scenario.Validate(); !s.ok()) return s;
  const size_t reps = scenario.reps;
  const size_t n_methods = scenario.methods.size();

  std::vector<ProcedureParams> method_params(n_methods, scenario.params);
  for (size_t i = 0; i < n_methods; ++i) {
    const MethodSpec& spec = scenario.methods[i];
    if (spec.m_peel.has_value()) method_params[i].m_peel = *spec.m_peel;
    if (spec.noise.has_value()) method_params[i].noise = *spec.noise;
    if (spec.m_tilde.has_value()) {
      method_params[i].adaptive.m_tilde = *spec.m_tilde;
    }
  }

  std::vector<std::vector<ReplicateMetrics>> per_rep(
      reps, std::vector<ReplicateMetrics>(n_methods));
  std::vector<absl::Status> statuses(reps);
  std::atomic<size_t> next{0};

  auto worker = [&]() {
    for (size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      const RandomStream rep_stream(scenario.seed, r);
      absl::StatusOr<GeneratedData> data =
          GenPValues(scenario, rep_stream.Split(0));
      if (!data.ok()) {
        statuses[r] = data.status();
        continue;
      }
      for (size_t i = 0; i < n_methods; ++i) {
        absl::StatusOr<MethodOutcome> outcome =
            RunProcedure(scenario.methods[i].procedure, method_params[i],
                         data->pvals, rep_stream.Split(1 + i));
        if (!outcome.ok()) {
          statuses[r] = absl::Status(
              outcome.status().code(),
              absl::StrCat("method '", scenario.methods[i].label,
                           "', replicate ", r, ": ",
                           outcome.status().message()));
          break;
        }
        per_rep[r][i] = ComputeMetrics(outcome->rejected, *data,
                                       method_params[i].adaptive.tau);
      }
    }
  };

  const size_t n_threads =
      std::clamp<size_t>(static_cast<size_t>(std::max(threads, 1)), 1, reps);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const absl::Status& s : statuses) {
    if (!s.ok()) return s;
  }

  MetricsTable table;
  for (size_t i = 0; i < n_methods; ++i) {
    auto column = [&](double ReplicateMetrics::*field) {
      std::vector<double> values(reps);
      for (size_t r = 0; r < reps; ++r) values[r] = per_rep[r][i].*field;
      return Summarize(values);
    };
    MethodMetrics row;
    row.label = scenario.methods[i].label;
    row.reps = reps;
    row.fdr = column(&ReplicateMetrics::fdp);
    row.fwer = column(&ReplicateMetrics::fwer);
    row.power = column(&ReplicateMetrics::power);
    row.rejections = column(&ReplicateMetrics::rejections);
    row.v_tau = column(&ReplicateMetrics::v_tau);
    row.v_tau_fraction = column(&ReplicateMetrics::v_tau_fraction);
    table.rows.push_back(std::move(row));
  }
  return table;
}

absl::StatusOr<AsymptoticBh> AsymptoticBhThreshold(double omega1, double alpha,
                                                   double signal,
                                                   double noise_inflation) {
  if (!(omega1 > 0.0 && omega1 < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("omega1 must lie in (0, 1), got ", omega1));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must lie in (0, 1), got ", alpha));
  }
  if (!(std::isfinite(signal) && signal != 0.0)) {
    return absl::InvalidArgumentError("signal must be finite and nonzero");
  }
  if (!(noise_inflation >= 0.0) || !std::isfinite(noise_inflation)) {
    return absl::InvalidArgumentError("noise inflation must be >= 0");
  }
  AsymptoticBh out;
  out.beta = (1.0 - alpha * (1.0 - omega1)) / (alpha * omega1);
  if (!(out.beta > 1.0)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "beta = ", out.beta, " <= 1: BH rejects everything in the limit"));
  }
  const double s_eff = std::abs(signal) / std::sqrt(1.0 + noise_inflation);
  auto f1 = [s_eff](double p) {
    return StdNormalCdf(StdNormalQuantileUnchecked(p) + s_eff);
  };
  auto g = [&](double p) { return f1(p) - out.beta * p; };

  double lo = 1e-12;
  double hi = 1.0;  // g(1) = 1 - beta < 0
  if (!(g(lo) > 0.0)) {
    return absl::FailedPreconditionError(
        "no positive root of F1(p) = beta p in (1e-12, 1)");
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  out.lambda_star = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
  out.tdp_limit = f1(out.lambda_star);
  return out;
}

absl::StatusOr<TdpGap> EmpiricalTdpGap(size_t m, double omega1, double signal,
                                       const TestConfig& noisy,
                                       const RandomStream& stream) {
  if (m == 0) return absl::InvalidArgumentError("m must be positive");
  if (!(omega1 >= 0.0 && omega1 <= 1.0)) {
    return absl::InvalidArgumentError("omega1 must lie in [0, 1]");
  }
  const GeneratedData data =
      GenMixturePValues(m, omega1, signal, stream.Split(0));
  const auto n_signal = static_cast<double>(
      std::count(data.is_signal.begin(), data.is_signal.end(), uint8_t{1}));
  TdpGap gap;
  if (n_signal == 0.0) {
    gap.no_signals = true;
    return gap;
  }

  absl::StatusOr<std::vector<size_t>> clean =
      ClassicProcedure(data.pvals, Family::kBH, noisy.alpha);
  if (!clean.ok()) return clean.status();
  TestConfig config = noisy;
  config.family = Family::kBH;
  config.step.reset();
  absl::StatusOr<RejectionResult> truncated =
      TruncatedSupTest(data.pvals, config, stream.Split(1));
  if (!truncated.ok()) return truncated.status();

  auto tdp = [&](std::span<const size_t> rejected) {
    double hits = 0.0;
    for (size_t j : rejected) hits += data.is_signal[j];
    return hits / n_signal;
  };
  gap.tdp_clean = tdp(*clean);
  gap.tdp_noisy = tdp(truncated->rejected_indices);
  gap.gap = gap.tdp_clean - gap.tdp_noisy;
  return gap;
}

}  // namespace supmt
