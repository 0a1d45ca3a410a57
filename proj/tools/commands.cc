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

#include "commands.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"
#include "supmt/privacy.h"
#include "supmt/random.h"
#include "supmt/scenario.h"

namespace supmt::cli {
namespace {

absl::string_view AbslView(std::string_view s) {
  return absl::string_view(s.data(), s.size());
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
      return kExitUsage;
    default:
      return kExitInternal;
  }
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return ExitCodeFor(status);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteOutput(const std::string& path, const std::string& text,
                         std::ostream& out) {
  if (path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::NotFoundError(absl::StrCat("cannot write '", path, "'"));
  }
  file << text;
  file.close();
  if (!file) return absl::InternalError(absl::StrCat("write to '", path, "' failed"));
  return absl::OkStatus();
}

std::vector<std::string> SplitFields(absl::string_view line) {
  std::vector<std::string> fields;
  for (absl::string_view field : absl::StrSplit(line, ',')) {
    fields.emplace_back(absl::StripAsciiWhitespace(field));
  }
  return fields;
}

std::string Num(double v) { return absl::StrFormat("%.17g", v); }

absl::StatusOr<NoiseKind> ParseNoise(const std::string& noise) {
  if (noise == "gaussian") return NoiseKind::kGaussian;
  if (noise == "laplace") return NoiseKind::kLaplace;
  return absl::InvalidArgumentError(
      absl::StrCat("noise must be gaussian or laplace, got '", noise, "'"));
}

absl::StatusOr<AdaptiveConfig::Mode> ParseAdaptiveMode(const std::string& mode) {
  if (mode == "joint") return AdaptiveConfig::Mode::kJoint;
  if (mode == "peel-count") return AdaptiveConfig::Mode::kPeelCountOnly;
  return absl::InvalidArgumentError(
      absl::StrCat("adaptive mode must be joint or peel-count, got '", mode, "'"));
}

absl::StatusOr<ProcedureParams> BuildParams(const RunOptions& options,
                                            Procedure procedure, size_t m) {
  ProcedureParams params;
  params.alpha = options.alpha;
  params.eps = options.eps.value_or(params.eps);
  params.delta = options.delta.value_or(params.delta);
  params.mu = options.mu;
  params.eta = options.gs;
  params.nu = options.nu;
  params.m_peel = options.m_peel.value_or(std::min<size_t>(200, m));
  absl::StatusOr<NoiseKind> noise = ParseNoise(options.noise);
  if (!noise.ok()) return noise.status();
  params.noise = *noise;
  if (params.noise == NoiseKind::kLaplace && options.mu.has_value()) {
    return absl::InvalidArgumentError(
        "Laplace noise takes --eps and --delta, not --mu");
  }
  if ((procedure == Procedure::kDpBh || procedure == Procedure::kDpBonf) &&
      options.mu.has_value()) {
    return absl::InvalidArgumentError(
        "dp-bh and dp-bonf take --eps and --delta, not --mu");
  }
  absl::StatusOr<AdaptiveConfig::Mode> mode =
      ParseAdaptiveMode(options.adaptive_mode);
  if (!mode.ok()) return mode.status();
  params.adaptive.mode = *mode;
  params.adaptive.tau = options.tau;
  params.adaptive.c = options.c;
  params.adaptive.c0 = options.c0;
  params.adaptive.m_tilde = options.m_tilde;
  params.adaptive.rho = options.rho;
  return params;
}

std::string BudgetEcho(Procedure procedure, const ProcedureParams& params,
                       const MethodOutcome& outcome) {
  if (!IsPrivate(procedure)) return "budget=none";
  if (!IsSup(procedure) || params.noise == NoiseKind::kLaplace) {
    return absl::StrFormat("eps=%.9g delta=%.9g", params.eps, params.delta);
  }
  double mu = params.mu.has_value() ? *params.mu
                                    : *ExperimentMu(params.eps, params.delta);
  std::string echo = absl::StrFormat("mu=%.9g", mu);
  if (outcome.sup.has_value() && outcome.sup->adaptive.has_value()) {
    absl::StrAppendFormat(&echo, " mu_estimator=%.9g mu_peeling=%.9g",
                          outcome.sup->adaptive->mu_estimator,
                          outcome.sup->adaptive->mu_peeling);
  }
  return echo;
}

}  // namespace

absl::StatusOr<std::vector<PValueRow>> ParsePValueCsv(std::string_view text) {
  std::vector<PValueRow> rows;
  std::optional<size_t> id_col;
  size_t p_col = 0;
  size_t n_cols = 0;
  bool layout_known = false;
  size_t line_no = 0;
  for (absl::string_view raw : absl::StrSplit(AbslView(text), '\n')) {
    ++line_no;
    const absl::string_view line = absl::StripAsciiWhitespace(raw);
    if (line.empty() || absl::StartsWith(line, "#")) continue;
    std::vector<std::string> fields = SplitFields(line);
    if (!layout_known) {
      layout_known = true;
      n_cols = fields.size();
      double probe;
      const bool numeric = absl::SimpleAtod(fields.back(), &probe);
      if (!numeric) {
        // Header row.
        bool have_p = false;
        for (size_t c = 0; c < fields.size(); ++c) {
          const std::string name = absl::AsciiStrToLower(fields[c]);
          if (name == "p" || name == "p_value" || name == "pvalue") {
            p_col = c;
            have_p = true;
          } else if (name == "id") {
            id_col = c;
          }
        }
        if (!have_p) {
          return absl::InvalidArgumentError(absl::StrCat(
              "line ", line_no, ": header has no 'p' column"));
        }
        continue;
      }
      if (n_cols == 2) {
        id_col = 0;
        p_col = 1;
      } else if (n_cols != 1) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ": expected 1 or 2 fields without a header, got ",
            n_cols));
      }
    }
    if (fields.size() != n_cols) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": expected ", n_cols, " fields, got ",
          fields.size()));
    }
    PValueRow row;
    if (!absl::SimpleAtod(fields[p_col], &row.p)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": malformed p-value '", fields[p_col], "'"));
    }
    if (!(row.p >= 0.0 && row.p <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ": p-value outside [0, 1]: ", fields[p_col]));
    }
    row.id = id_col.has_value() ? fields[*id_col]
                                : absl::StrCat(rows.size() + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return absl::InvalidArgumentError("no p-values");
  return rows;
}

std::string FormatRunOutput(const std::vector<PValueRow>& rows,
                            const MethodOutcome& outcome,
                            const std::string& summary) {
  std::vector<std::optional<double>> noisy(rows.size());
  for (const auto& [index, value] : outcome.released) noisy[index] = value;
  std::vector<uint8_t> rejected(rows.size(), 0);
  for (size_t j : outcome.rejected) rejected[j] = 1;

  std::string out = "id,p,noisy_p,rejected\n";
  for (size_t j = 0; j < rows.size(); ++j) {
    absl::StrAppend(&out, rows[j].id, ",", Num(rows[j].p), ",",
                    noisy[j].has_value() ? Num(*noisy[j]) : "", ",",
                    rejected[j] ? "1" : "0", "\n");
  }
  absl::StrAppend(&out, "# summary ", summary, "\n");
  return out;
}

absl::StatusOr<RunOutput> ParseRunOutput(std::string_view text) {
  RunOutput output;
  size_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(AbslView(text), '\n')) {
    ++line_no;
    if (line.empty()) continue;
    if (absl::ConsumePrefix(&line, "# summary ")) {
      output.summary = std::string(line);
      continue;
    }
    if (line_no == 1) {
      if (line != "id,p,noisy_p,rejected") {
        return absl::InvalidArgumentError("unexpected header");
      }
      continue;
    }
    std::vector<std::string> fields = SplitFields(line);
    if (fields.size() != 4) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected 4 fields"));
    }
    OutputRow row;
    row.id = fields[0];
    if (!absl::SimpleAtod(fields[1], &row.p)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": malformed p"));
    }
    if (!fields[2].empty()) {
      double v;
      if (!absl::SimpleAtod(fields[2], &v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_no, ": malformed noisy_p"));
      }
      row.noisy_p = v;
    }
    row.rejected = fields[3] == "1";
    output.rows.push_back(std::move(row));
  }
  return output;
}

int RunCommand(const RunOptions& options, std::ostream& out,
               std::ostream& err) {
  absl::StatusOr<std::string> text = ReadFile(options.input);
  if (!text.ok()) return Fail(err, text.status());
  absl::StatusOr<std::vector<PValueRow>> rows = ParsePValueCsv(*text);
  if (!rows.ok()) return Fail(err, rows.status());
  absl::StatusOr<Procedure> procedure = ParseProcedure(options.method);
  if (!procedure.ok()) return Fail(err, procedure.status());
  absl::StatusOr<ProcedureParams> params =
      BuildParams(options, *procedure, rows->size());
  if (!params.ok()) return Fail(err, params.status());

  std::vector<double> pvals;
  pvals.reserve(rows->size());
  for (const PValueRow& row : *rows) pvals.push_back(row.p);
  absl::StatusOr<MethodOutcome> outcome = RunProcedure(
      *procedure, *params, pvals, RandomStream(options.seed, 0));
  if (!outcome.ok()) return Fail(err, outcome.status());

  size_t peel_count = pvals.size();
  if (IsPrivate(*procedure)) peel_count = outcome->released.size();
  std::string summary = absl::StrFormat(
      "method=%s alpha=%.9g m=%d rejections=%d j_star=%d m_peel=%d %s seed=%d",
      std::string(ProcedureName(*procedure)), params->alpha, pvals.size(),
      outcome->rejected.size(), outcome->rejected.size(), peel_count,
      BudgetEcho(*procedure, *params, *outcome), options.seed);
  if (outcome->sup.has_value() && outcome->sup->adaptive.has_value()) {
    absl::StrAppendFormat(&summary, " pi0_hat=%.9g",
                          outcome->sup->adaptive->pi0_hat);
  }

  const std::string csv = FormatRunOutput(*rows, *outcome, summary);
  if (absl::Status s = WriteOutput(options.output, csv, out); !s.ok()) {
    return Fail(err, s);
  }
  if (!options.output.empty()) out << "# summary " << summary << "\n";
  return kExitOk;
}

int SimulateCommand(const SimulateOptions& options, std::ostream& out,
                    std::ostream& err) {
  absl::StatusOr<std::string> text = ReadFile(options.scenario);
  if (!text.ok()) return Fail(err, text.status());
  std::string source = *std::move(text);
  if (options.full_scale) absl::StrAppend(&source, "\nfull_scale = true\n");
  if (options.seed.has_value()) {
    absl::StrAppend(&source, "\nseed = ", *options.seed, "\n");
  }
  if (options.reps.has_value()) {
    absl::StrAppend(&source, "\nreps = ", *options.reps, "\n");
  }
  absl::StatusOr<SimScenario> scenario = ParseScenario(source);
  if (!scenario.ok()) return Fail(err, scenario.status());
  if (options.threads < 1) {
    return Fail(err, absl::InvalidArgumentError("--threads must be >= 1"));
  }
  absl::StatusOr<MetricsTable> table =
      RunReplications(*scenario, options.threads);
  if (!table.ok()) return Fail(err, table.status());
  if (absl::Status s = WriteOutput(options.output, table->ToCsv(), out);
      !s.ok()) {
    return Fail(err, s);
  }
  return kExitOk;
}

int PrivacyMuToDelta(double mu, double eps, std::ostream& out,
                     std::ostream& err) {
  absl::StatusOr<double> delta = GdpToApproxDpDelta(mu, eps);
  if (!delta.ok()) return Fail(err, delta.status());
  out << absl::StrFormat("delta=%.9g\n", *delta);
  return kExitOk;
}

int PrivacyEpsToMu(double eps, double delta, std::ostream& out,
                   std::ostream& err) {
  absl::StatusOr<double> mu = ExperimentMu(eps, delta);
  if (!mu.ok()) return Fail(err, mu.status());
  out << absl::StrFormat("mu=%.9g\n", *mu);
  return kExitOk;
}

int PrivacyCalibrate(std::optional<double> mu, std::optional<double> eps,
                     std::optional<double> delta, const std::string& noise,
                     double gs, size_t m_peel, std::ostream& out,
                     std::ostream& err) {
  absl::StatusOr<NoiseKind> kind = ParseNoise(noise);
  if (!kind.ok()) return Fail(err, kind.status());
  absl::StatusOr<NoiseScales> scales;
  if (*kind == NoiseKind::kGaussian) {
    if (!mu.has_value()) {
      if (!eps.has_value() || !delta.has_value()) {
        return Fail(err, absl::InvalidArgumentError(
                             "give --mu, or --eps and --delta"));
      }
      absl::StatusOr<double> derived = ExperimentMu(*eps, *delta);
      if (!derived.ok()) return Fail(err, derived.status());
      mu = *derived;
    }
    scales = CalibratePeelingScales(*mu, gs, m_peel);
  } else {
    if (!eps.has_value() || !delta.has_value()) {
      return Fail(err, absl::InvalidArgumentError(
                           "Laplace calibration needs --eps and --delta"));
    }
    scales = CalibrateLaplacePeelingScales(*eps, *delta, gs, m_peel);
  }
  if (!scales.ok()) return Fail(err, scales.status());
  out << absl::StrFormat("sigma0=%.9g\nsigma1=%.9g\n", scales->sigma0,
                         scales->sigma1);
  return kExitOk;
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Private multiple testing with reversed peeling"};
  app.name("supmt");
  app.require_subcommand(1);

  RunOptions run;
  double run_mu = 0.0, run_eps = 0.0, run_delta = 0.0, run_nu = 0.0,
         run_c = 0.0;
  size_t run_m_peel = 0;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one procedure on a p-value file");
  run_cmd->add_option("--input", run.input, "CSV with a p column")->required();
  run_cmd->add_option("--method", run.method, "Procedure name")->required();
  run_cmd->add_option("--output", run.output, "Output CSV (default stdout)");
  run_cmd->add_option("--alpha", run.alpha, "Target level");
  CLI::Option* mu_opt = run_cmd->add_option("--mu", run_mu, "GDP budget");
  CLI::Option* eps_opt = run_cmd->add_option("--eps", run_eps, "Epsilon");
  CLI::Option* delta_opt = run_cmd->add_option("--delta", run_delta, "Delta");
  run_cmd->add_option("--noise", run.noise, "gaussian or laplace");
  run_cmd->add_option("--gs,--eta", run.gs, "Sensitivity");
  CLI::Option* m_peel_opt =
      run_cmd->add_option("--m-peel", run_m_peel, "Peeling number");
  CLI::Option* nu_opt =
      run_cmd->add_option("--nu", run_nu, "Truncation for dp-bh and dp-bonf");
  run_cmd->add_option("--tau", run.tau, "Adaptive cutoff");
  CLI::Option* c_opt = run_cmd->add_option("--c", run_c, "Peeling inflation");
  run_cmd->add_option("--c0", run.c0, "Null-proportion floor");
  run_cmd->add_option("--m-tilde", run.m_tilde, "Minimum peeling number");
  run_cmd->add_option("--rho", run.rho, "Estimator share of the budget");
  run_cmd->add_option("--adaptive-mode", run.adaptive_mode, "joint or peel-count");
  run_cmd->add_option("--seed", run.seed, "Random seed");

  SimulateOptions sim;
  uint64_t sim_seed = 0;
  size_t sim_reps = 0;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Run a simulation scenario");
  sim_cmd->add_option("scenario", sim.scenario, "Scenario file")->required();
  sim_cmd->add_option("--output", sim.output, "Metrics CSV (default stdout)");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads");
  CLI::Option* sim_seed_opt =
      sim_cmd->add_option("--seed", sim_seed, "Override the scenario seed");
  CLI::Option* sim_reps_opt =
      sim_cmd->add_option("--reps", sim_reps, "Override the replicate count");
  sim_cmd->add_flag("--full-scale", sim.full_scale, "m = 20000, m1 = 100");

  CLI::App* privacy = app.add_subcommand("privacy", "Budget conversions");
  privacy->require_subcommand(1);
  double p_mu = 0.0, p_eps = 0.0, p_delta = 0.0, p_gs = 1e-4;
  size_t p_m_peel = 200;
  std::string p_noise = "gaussian";
  CLI::App* mu_to_delta =
      privacy->add_subcommand("mu-to-delta", "delta of a mu-GDP mechanism at eps");
  mu_to_delta->add_option("--mu", p_mu)->required();
  mu_to_delta->add_option("--eps", p_eps)->required();
  CLI::App* eps_to_mu =
      privacy->add_subcommand("eps-to-mu", "mu used for an (eps, delta) target");
  eps_to_mu->add_option("--eps", p_eps)->required();
  eps_to_mu->add_option("--delta", p_delta)->required();
  CLI::App* calibrate =
      privacy->add_subcommand("calibrate", "Peeling noise scales");
  CLI::Option* cal_mu = calibrate->add_option("--mu", p_mu);
  CLI::Option* cal_eps = calibrate->add_option("--eps", p_eps);
  CLI::Option* cal_delta = calibrate->add_option("--delta", p_delta);
  calibrate->add_option("--noise", p_noise);
  calibrate->add_option("--gs", p_gs);
  calibrate->add_option("--m-peel", p_m_peel);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run_cmd->parsed()) {
    if (mu_opt->count() > 0) run.mu = run_mu;
    if (eps_opt->count() > 0) run.eps = run_eps;
    if (delta_opt->count() > 0) run.delta = run_delta;
    if (m_peel_opt->count() > 0) run.m_peel = run_m_peel;
    if (nu_opt->count() > 0) run.nu = run_nu;
    if (c_opt->count() > 0) run.c = run_c;
    return RunCommand(run, out, err);
  }
  if (sim_cmd->parsed()) {
    if (sim_seed_opt->count() > 0) sim.seed = sim_seed;
    if (sim_reps_opt->count() > 0) sim.reps = sim_reps;
    return SimulateCommand(sim, out, err);
  }
  if (mu_to_delta->parsed()) return PrivacyMuToDelta(p_mu, p_eps, out, err);
  if (eps_to_mu->parsed()) return PrivacyEpsToMu(p_eps, p_delta, out, err);
  if (calibrate->parsed()) {
    auto opt = [](CLI::Option* o, double v) {
      return o->count() > 0 ? std::optional<double>(v) : std::nullopt;
    };
    return PrivacyCalibrate(opt(cal_mu, p_mu), opt(cal_eps, p_eps),
                            opt(cal_delta, p_delta), p_noise, p_gs, p_m_peel,
                            out, err);
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace supmt::cli
