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

// Scenario files.
//
// A scenario is a list of `key = value` lines; `#` starts a comment. Scalar
// keys:
//
//   m, m1, theta_signal, null_mode (uniform | conservative),
//   dependence (independent | block), block_size, block_rho, reps, seed,
//   alpha, eps, delta, mu, eta, nu, m_peel, noise (gaussian | laplace),
//   tau, c, c0, m_tilde, rho, adaptive_mode (joint | peel-count),
//   full_scale (true | false; sets m = 20000 and m1 = 100)
//
// Methods are listed either as `methods = bh, sup-bh, ...` (label equals
// the procedure name) or one per line with overrides:
//
//   method sup-bh-100 = sup-bh m_peel=100 noise=laplace m_tilde=50
//
// Every problem found is reported, one per line, in a single error.

#ifndef SUPMT_SCENARIO_H_
#define SUPMT_SCENARIO_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "supmt/simulate.h"

namespace supmt {

absl::StatusOr<SimScenario> ParseScenario(std::string_view text);

absl::StatusOr<SimScenario> LoadScenario(const std::string& path);

}  // namespace supmt

#endif  // SUPMT_SCENARIO_H_
