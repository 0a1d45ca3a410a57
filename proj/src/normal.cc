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

#include "supmt/normal.h"

#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace supmt {
namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

// Beyond this point erfc() is replaced by a continued fraction for the
// Mills ratio; erfc(t / sqrt 2) would start losing range near t = 37.
constexpr double kMillsContinuedFractionCutoff = 30.0;

// Phi(-t) / phi(t) = 1 / (t + 1 / (t + 2 / (t + 3 / (t + ...)))), t > 0.
double MillsRatioContinuedFraction(double t) {
  double f = t;
  for (int k = 80; k >= 1; --k) f = t + k / f;
  return 1.0 / f;
}

// Wichura's AS 241 (PPND16) for the lower half, p <= 0.5.
double LowerQuantileAs241(double p) {
  const double q = p - 0.5;
  if (std::abs(q) < 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r +
                4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r +
              1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r +
                2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r +
              6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r +
            1.0);
  }
  double r = std::sqrt(-std::log(p));
  double x;
  if (r < 5.0) {
    r -= 1.6;
    x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r +
             1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r +
           5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r +
         1.42343711074968357734e0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r +
             1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r +
           1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r +
         1.0);
  } else {
    r -= 5.0;
    x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r +
             2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r +
           1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r +
         6.65790464350110377720e0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r +
             7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r +
           1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r +
         1.0);
  }
  return -x;
}

}  // namespace

double StdNormalPdf(double x) { return std::exp(-0.5 * x * x - kLogSqrtTwoPi); }

double StdNormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double LogMillsRatio(double t) {
  if (t > kMillsContinuedFractionCutoff) {
    return std::log(MillsRatioContinuedFraction(t));
  }
  return std::log(0.5 * std::erfc(t / std::numbers::sqrt2)) + 0.5 * t * t +
         kLogSqrtTwoPi;
}

double LogStdNormalCdf(double x) {
  if (x < -kMillsContinuedFractionCutoff) {
    return -0.5 * x * x - kLogSqrtTwoPi + LogMillsRatio(-x);
  }
  if (x > 0.0) return std::log1p(-StdNormalCdf(-x));
  return std::log(StdNormalCdf(x));
}

double StdNormalQuantileUnchecked(double p) {
  if (p > 0.5) return -StdNormalQuantileUnchecked(1.0 - p);
  double x = LowerQuantileAs241(p);
  // One Newton step against our own CDF so that the pair round-trips.
  const double density = StdNormalPdf(x);
  if (density > 0.0) x -= (StdNormalCdf(x) - p) / density;
  return x;
}

absl::StatusOr<double> StdNormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("StdNormalQuantile: p must lie in (0, 1), got ", p));
  }
  return StdNormalQuantileUnchecked(p);
}

// W = N + L with L = +E or -E (probability 1/2 each), E ~ Exp(mean b):
//   P(N + E <= x) = Phi(x) - phi(x) R(1/b - x)
//   P(N - E <= x) = Phi(x) + phi(x) R(x + 1/b)
// with R the Mills ratio. Both terms are evaluated through log R so the
// exp(x / b) factors of the textbook form never appear. The upper half uses
// the symmetry F(x) = 1 - F(-x).
double NormalLaplaceCdfUnchecked(double x, double b) {
  if (x > 0.0) return 1.0 - NormalLaplaceCdfUnchecked(-x, b);
  const double inv_b = 1.0 / b;
  const double cdf = StdNormalCdf(x);
  const double log_pdf = -0.5 * x * x - kLogSqrtTwoPi;
  const double plus_exponential =
      cdf * -std::expm1(LogMillsRatio(inv_b - x) - LogMillsRatio(-x));
  const double minus_exponential =
      cdf + std::exp(log_pdf + LogMillsRatio(x + inv_b));
  return 0.5 * (plus_exponential + minus_exponential);
}

absl::StatusOr<double> NormalLaplaceCdf(double x, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("NormalLaplaceCdf: scale must be positive, got ", b));
  }
  if (!std::isfinite(x)) {
    return absl::InvalidArgumentError("NormalLaplaceCdf: x must be finite");
  }
  return NormalLaplaceCdfUnchecked(x, b);
}

}  // namespace supmt
