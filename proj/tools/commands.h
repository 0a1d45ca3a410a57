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

// Implementation of the `supmt` command-line tool.
//
//   supmt run --input p.csv --method sup-bh --mu 0.5 --seed 7 --output out.csv
//   supmt simulate scenarios/desk.conf --output metrics.csv --threads 4
//   supmt privacy mu-to-delta --mu 1 --eps 1
//
// Exit codes: 0 success, 2 usage or data error, 1 internal error.

#ifndef SUPMT_TOOLS_COMMANDS_H_
#define SUPMT_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "supmt/simulate.h"

namespace supmt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

struct PValueRow {
  std::string id;
  double p = 0.0;
};

// Accepts `id,p` (any column order, extra columns ignored), a header with
// just `p`, or headerless rows of one (`p`) or two (`id,p`) fields. Errors
// carry the 1-based line number.
absl::StatusOr<std::vector<PValueRow>> ParsePValueCsv(std::string_view text);

struct RunOptions {
  std::string input;
  std::string method;
  std::string output;  // empty: write the CSV to stdout
  double alpha = 0.1;
  std::optional<double> mu;
  std::optional<double> eps;
  std::optional<double> delta;
  std::string noise = "gaussian";
  double gs = 1e-4;
  // Unset: min(200, m).
  std::optional<size_t> m_peel;
  std::optional<double> nu;
  double tau = 0.5;
  std::optional<double> c;
  double c0 = 0.5;
  size_t m_tilde = 100;
  double rho = 0.1;
  std::string adaptive_mode = "joint";
  uint64_t seed = 0;
};

// One parsed line of a `run` output file.
struct OutputRow {
  std::string id;
  double p = 0.0;
  std::optional<double> noisy_p;
  bool rejected = false;
};

struct RunOutput {
  std::vector<OutputRow> rows;
  std::string summary;  // the `# summary` line without the leading "# "
};

absl::StatusOr<RunOutput> ParseRunOutput(std::string_view text);

// Builds the output CSV for `rows` and a procedure outcome.
std::string FormatRunOutput(const std::vector<PValueRow>& rows,
                            const MethodOutcome& outcome,
                            const std::string& summary);

int RunCommand(const RunOptions& options, std::ostream& out, std::ostream& err);

struct SimulateOptions {
  std::string scenario;
  std::string output;  // empty: stdout
  int threads = 1;
  std::optional<uint64_t> seed;
  std::optional<size_t> reps;
  bool full_scale = false;
};

int SimulateCommand(const SimulateOptions& options, std::ostream& out,
                    std::ostream& err);

int PrivacyMuToDelta(double mu, double eps, std::ostream& out,
                     std::ostream& err);
int PrivacyEpsToMu(double eps, double delta, std::ostream& out,
                   std::ostream& err);
int PrivacyCalibrate(std::optional<double> mu, std::optional<double> eps,
                     std::optional<double> delta, const std::string& noise,
                     double gs, size_t m_peel, std::ostream& out,
                     std::ostream& err);

// Parses argv and dispatches. Never calls exit().
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace supmt::cli

#endif  // SUPMT_TOOLS_COMMANDS_H_
