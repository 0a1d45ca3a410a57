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

#include "supmt/scenario.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "absl/strings/strip.h"

namespace supmt {
namespace {

class Parser {
 public:
  explicit Parser(SimScenario& scenario) : s_(scenario) {}

  void Line(size_t line_no, absl::string_view raw) {
    line_ = line_no;
    absl::string_view line = raw.substr(0, raw.find('#'));
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) return;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      Error("expected 'key = value'");
      return;
    }
    absl::string_view key = absl::StripAsciiWhitespace(line.substr(0, eq));
    const absl::string_view value =
        absl::StripAsciiWhitespace(line.substr(eq + 1));
    if (absl::ConsumePrefix(&key, "method ")) {
      Method(absl::StripAsciiWhitespace(key), value);
    } else {
      Scalar(key, value);
    }
  }

  absl::Status Finish() {
    if (full_scale_) {
      s_.m = 20000;
      s_.m1 = 100;
    }
    if (dependence_ == "independent") s_.block_size = 0;
    if (dependence_ == "block" && s_.block_size == 0) {
      problems_.push_back("dependence = block needs block_size >= 1");
    }
    if (!problems_.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid scenario:\n  ", absl::StrJoin(problems_, "\n  ")));
    }
    return s_.Validate();
  }

 private:
  void Error(absl::string_view message) {
    problems_.push_back(absl::StrCat("line ", line_, ": ", message));
  }

  template <typename T>
  void Number(absl::string_view key, absl::string_view value, T& out) {
    if (!absl::SimpleAtoi(value, &out)) {
      Error(absl::StrCat(key, ": expected an integer, got '", value, "'"));
    }
  }

  void Number(absl::string_view key, absl::string_view value, double& out) {
    if (!absl::SimpleAtod(value, &out)) {
      Error(absl::StrCat(key, ": expected a number, got '", value, "'"));
    }
  }

  template <typename T>
  void Optional(absl::string_view key, absl::string_view value,
                std::optional<T>& out) {
    T parsed{};
    Number(key, value, parsed);
    out = parsed;
  }

  bool Noise(absl::string_view value, NoiseKind& out) {
    if (value == "gaussian") {
      out = NoiseKind::kGaussian;
    } else if (value == "laplace") {
      out = NoiseKind::kLaplace;
    } else {
      Error(absl::StrCat("noise must be gaussian or laplace, got '", value, "'"));
      return false;
    }
    return true;
  }

  void AddMethod(std::string label, absl::string_view procedure,
                 MethodSpec spec) {
    absl::StatusOr<Procedure> parsed = ParseProcedure(std::string_view(procedure.data(), procedure.size()));
    if (!parsed.ok()) {
      Error(parsed.status().message());
      return;
    }
    spec.label = std::move(label);
    spec.procedure = *parsed;
    s_.methods.push_back(std::move(spec));
  }

  void Method(absl::string_view label, absl::string_view value) {
    std::vector<absl::string_view> parts =
        absl::StrSplit(value, absl::ByAnyChar(" \t"), absl::SkipEmpty());
    if (label.empty() || parts.empty()) {
      Error("expected 'method <label> = <procedure> [key=value ...]'");
      return;
    }
    MethodSpec spec;
    for (size_t i = 1; i < parts.size(); ++i) {
      std::pair<absl::string_view, absl::string_view> kv =
          absl::StrSplit(parts[i], absl::MaxSplits('=', 1));
      if (kv.first == "m_peel") {
        Optional(kv.first, kv.second, spec.m_peel);
      } else if (kv.first == "m_tilde") {
        Optional(kv.first, kv.second, spec.m_tilde);
      } else if (kv.first == "noise") {
        NoiseKind kind;
        if (Noise(kv.second, kind)) spec.noise = kind;
      } else {
        Error(absl::StrCat("unknown method option '", kv.first, "'"));
      }
    }
    AddMethod(std::string(label), parts[0], std::move(spec));
  }

  void Scalar(absl::string_view key, absl::string_view value) {
    ProcedureParams& p = s_.params;
    if (key == "m") {
      Number(key, value, s_.m);
    } else if (key == "m1") {
      Number(key, value, s_.m1);
    } else if (key == "theta_signal") {
      Number(key, value, s_.theta_signal);
    } else if (key == "null_mode") {
      if (value == "uniform") {
        s_.null_mode = NullMode::kUniform;
      } else if (value == "conservative") {
        s_.null_mode = NullMode::kConservative;
      } else {
        Error(absl::StrCat("null_mode must be uniform or conservative, got '",
                           value, "'"));
      }
    } else if (key == "dependence") {
      if (value != "independent" && value != "block") {
        Error(absl::StrCat("dependence must be independent or block, got '",
                           value, "'"));
      }
      dependence_ = std::string(value);
    } else if (key == "block_size") {
      Number(key, value, s_.block_size);
    } else if (key == "block_rho") {
      Number(key, value, s_.block_rho);
    } else if (key == "reps") {
      Number(key, value, s_.reps);
    } else if (key == "seed") {
      Number(key, value, s_.seed);
    } else if (key == "alpha") {
      Number(key, value, p.alpha);
    } else if (key == "eps") {
      Number(key, value, p.eps);
    } else if (key == "delta") {
      Number(key, value, p.delta);
    } else if (key == "mu") {
      Optional(key, value, p.mu);
    } else if (key == "eta") {
      Number(key, value, p.eta);
    } else if (key == "nu") {
      Optional(key, value, p.nu);
    } else if (key == "m_peel") {
      Number(key, value, p.m_peel);
    } else if (key == "noise") {
      Noise(value, p.noise);
    } else if (key == "tau") {
      Number(key, value, p.adaptive.tau);
    } else if (key == "c") {
      Optional(key, value, p.adaptive.c);
    } else if (key == "c0") {
      Number(key, value, p.adaptive.c0);
    } else if (key == "m_tilde") {
      Number(key, value, p.adaptive.m_tilde);
    } else if (key == "rho") {
      Number(key, value, p.adaptive.rho);
    } else if (key == "adaptive_mode") {
      if (value == "joint") {
        p.adaptive.mode = AdaptiveConfig::Mode::kJoint;
      } else if (value == "peel-count") {
        p.adaptive.mode = AdaptiveConfig::Mode::kPeelCountOnly;
      } else {
        Error(absl::StrCat("adaptive_mode must be joint or peel-count, got '",
                           value, "'"));
      }
    } else if (key == "full_scale") {
      if (value == "true") {
        full_scale_ = true;
      } else if (value == "false") {
        full_scale_ = false;
      } else {
        Error(absl::StrCat("full_scale must be true or false, got '", value, "'"));
      }
    } else if (key == "methods") {
      for (absl::string_view name :
           absl::StrSplit(value, ',', absl::SkipWhitespace())) {
        name = absl::StripAsciiWhitespace(name);
        AddMethod(std::string(name), name, MethodSpec{});
      }
    } else {
      Error(absl::StrCat("unknown key '", key, "'"));
    }
  }

  SimScenario& s_;
  size_t line_ = 0;
  bool full_scale_ = false;
  std::string dependence_;
  std::vector<std::string> problems_;
};

}  // namespace

absl::StatusOr<SimScenario> ParseScenario(std::string_view std_text) {
  const absl::string_view text(std_text.data(), std_text.size());
  SimScenario scenario;
  scenario.methods.clear();
  Parser parser(scenario);
  size_t line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    parser.Line(++line_no, line);
  }
  if (absl::Status s = parser.Finish(); !s.ok()) return s;
  return scenario;
}

absl::StatusOr<SimScenario> LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open scenario '", path, "'"));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseScenario(buffer.str());
}

}  // namespace supmt
