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

// Monte Carlo harness: synthetic p-values with known truth, a registry of
// procedures, the replication engine and the large-m power-loss oracle.

#ifndef SUPMT_SIMULATE_H_
#define SUPMT_SIMULATE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "supmt/adaptive.h"
#include "supmt/random.h"
#include "supmt/sup_test.h"
#include "supmt/transform.h"

namespace supmt {

enum class Procedure {
  kBH,
  kBY,
  kBonf,
  kHolm,
  kDpBh,
  kDpBonf,
  kSupBH,
  kSupBY,
  kSupBonf,
  kSupHolm,
  kAsupBH,
  kAsupBonf,
};

// "bh", "dp-bh", "sup-holm", "asup-bonf", ...
absl::StatusOr<Procedure> ParseProcedure(std::string_view name);
std::string_view ProcedureName(Procedure procedure);
std::vector<Procedure> AllProcedures();

bool IsPrivate(Procedure procedure);
bool IsSup(Procedure procedure);       // sup-* and asup-*
bool IsAdaptive(Procedure procedure);  // asup-*
Family ProcedureFamily(Procedure procedure);

// Privacy and tuning parameters shared by every procedure in a run.
struct ProcedureParams {
  double alpha = 0.1;
  double eps = 0.5;
  double delta = 1e-3;
  // GDP parameter for Gaussian-noise procedures. Unset means
  // ExperimentMu(eps, delta).
  std::optional<double> mu;
  // Sensitivity: eta for the forward-peeling comparators and the global
  // sensitivity of Q(p) for the reversed-peeling procedures.
  double eta = 1e-4;
  // Truncation for the comparators. Unset means 0.5 alpha / m.
  std::optional<double> nu;
  size_t m_peel = 200;
  NoiseKind noise = NoiseKind::kGaussian;
  AdaptiveConfig adaptive;
};

// A labelled procedure with optional per-method overrides.
struct MethodSpec {
  std::string label;
  Procedure procedure = Procedure::kBH;
  std::optional<size_t> m_peel;
  std::optional<NoiseKind> noise;
  std::optional<size_t> m_tilde;
};

// Everything a procedure run reports.
struct MethodOutcome {
  std::vector<size_t> rejected;
  // Released noisy statistic (p scale) for each released index.
  std::vector<std::pair<size_t, double>> released;
  std::optional<RejectionResult> sup;
};

absl::StatusOr<MethodOutcome> RunProcedure(Procedure procedure,
                                           const ProcedureParams& params,
                                           std::span<const double> pvals,
                                           const RandomStream& stream);

enum class NullMode { kUniform, kConservative };

struct SimScenario {
  size_t m = 5000;
  size_t m1 = 50;
  double theta_signal = 4.0;
  NullMode null_mode = NullMode::kUniform;
  // 0 means independent statistics; otherwise equicorrelated blocks.
  size_t block_size = 0;
  double block_rho = 0.0;
  size_t reps = 200;
  uint64_t seed = 1;
  ProcedureParams params;
  std::vector<MethodSpec> methods;

  // Enumerates every violation, one per line.
  absl::Status Validate() const;
};

struct GeneratedData {
  std::vector<double> pvals;
  std::vector<uint8_t> is_signal;
};

// T ~ N(0, Sigma) with unit variances (block-equicorrelated or independent);
// p_j = Phi(T_j - theta_j). m1 randomly placed signals get theta_signal;
// nulls get 0, or in conservative mode 40% of them get U(-0.3, 0).
absl::StatusOr<GeneratedData> GenPValues(const SimScenario& scenario,
                                         const RandomStream& stream);

// Independent mixture: each hypothesis is a signal with probability omega1,
// p_j = Phi(T_j - signal * theta_j).
GeneratedData GenMixturePValues(size_t m, double omega1, double signal,
                                const RandomStream& stream);

struct ReplicateMetrics {
  double fdp = 0.0;
  double fwer = 0.0;
  double power = 0.0;
  double rejections = 0.0;
  // Null rejections whose raw p-value exceeds tau, and that count over R v 1.
  double v_tau = 0.0;
  double v_tau_fraction = 0.0;
};

ReplicateMetrics ComputeMetrics(std::span<const size_t> rejected,
                                const GeneratedData& data, double tau);

struct MetricSummary {
  double mean = 0.0;
  double std_error = 0.0;
};

struct MethodMetrics {
  std::string label;
  size_t reps = 0;
  MetricSummary fdr;
  MetricSummary fwer;
  MetricSummary power;
  MetricSummary rejections;
  MetricSummary v_tau;
  MetricSummary v_tau_fraction;
};

struct MetricsTable {
  std::vector<MethodMetrics> rows;

  const MethodMetrics* Find(std::string_view label) const;
  // Header `method,metric,mean,stderr,reps`, one line per (method, metric).
  std::string ToCsv() const;
};

// Replicate r uses RandomStream(seed, r): data from Split(0), method i from
// Split(1 + i). Replicates run on `threads` workers; the result does not
// depend on the thread count.
absl::StatusOr<MetricsTable> RunReplications(const SimScenario& scenario,
                                             int threads = 1);

// Large-m limit of the BH rejection threshold for non-null p-values with
// CDF F1(p) = Phi(Phi^{-1}(p) + s), s = signal / sqrt(1 + noise_inflation):
// the largest root of F1(p) = beta p, beta = (1 - alpha omega0) /
// (alpha omega1), and the limiting true discovery proportion F1(lambda*).
struct AsymptoticBh {
  double lambda_star = 0.0;
  double tdp_limit = 0.0;
  double beta = 0.0;
};

absl::StatusOr<AsymptoticBh> AsymptoticBhThreshold(double omega1, double alpha,
                                                   double signal,
                                                   double noise_inflation);

struct TdpGap {
  double gap = 0.0;
  double tdp_clean = 0.0;
  double tdp_noisy = 0.0;
  bool no_signals = false;
};

// Draws one mixture data set, runs classic BH on the raw p-values and the
// unpeeled noisy BH (TruncatedSupTest) on the same data, and returns the
// difference in true discovery proportions. `noisy` supplies the alpha,
// noise calibration and peeling number; its family is forced to BH.
absl::StatusOr<TdpGap> EmpiricalTdpGap(size_t m, double omega1, double signal,
                                       const TestConfig& noisy,
                                       const RandomStream& stream);

}  // namespace supmt

#endif  // SUPMT_SIMULATE_H_
