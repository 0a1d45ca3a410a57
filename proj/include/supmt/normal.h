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

// Standard normal and normal-plus-Laplace distribution functions.

#ifndef SUPMT_NORMAL_H_
#define SUPMT_NORMAL_H_

#include "absl/status/statusor.h"

namespace supmt {

double StdNormalPdf(double x);

double StdNormalCdf(double x);

// log(Phi(x)), accurate far into the lower tail where Phi(x) underflows.
double LogStdNormalCdf(double x);

// log of the Mills ratio Phi(-t) / phi(t). Finite for every finite t.
double LogMillsRatio(double t);

// Inverse of StdNormalCdf. Returns an error unless 0 < p < 1.
absl::StatusOr<double> StdNormalQuantile(double p);

// Same as StdNormalQuantile without the domain check. Requires 0 < p < 1.
double StdNormalQuantileUnchecked(double p);

// CDF of W = N(0, 1) + Laplace(0, b). Returns an error unless b > 0.
absl::StatusOr<double> NormalLaplaceCdf(double x, double b);

// Same as NormalLaplaceCdf without the domain check. Requires b > 0.
double NormalLaplaceCdfUnchecked(double x, double b);

}  // namespace supmt

#endif  // SUPMT_NORMAL_H_
