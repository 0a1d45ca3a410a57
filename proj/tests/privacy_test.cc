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

#include "supmt/privacy.h"

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.h"

namespace supmt {
namespace {

TEST(PrivacyBudgetTest, FactoriesValidate) {
  EXPECT_TRUE(PrivacyBudget::Gdp(0.5).ok());
  EXPECT_FALSE(PrivacyBudget::Gdp(0.0).ok());
  EXPECT_FALSE(PrivacyBudget::Gdp(-1.0).ok());
  EXPECT_TRUE(PrivacyBudget::ApproxDp(1.0, 1e-5).ok());
  EXPECT_FALSE(PrivacyBudget::ApproxDp(0.0, 1e-5).ok());
  EXPECT_FALSE(PrivacyBudget::ApproxDp(1.0, 0.0).ok());
  EXPECT_FALSE(PrivacyBudget::ApproxDp(1.0, 1.0).ok());

  const PrivacyBudget gdp = *PrivacyBudget::Gdp(0.25);
  EXPECT_TRUE(gdp.is_gdp());
  EXPECT_EQ(gdp.gdp().mu, 0.25);
  const PrivacyBudget adp = *PrivacyBudget::ApproxDp(0.5, 1e-3);
  EXPECT_TRUE(adp.is_approx_dp());
  EXPECT_EQ(adp.approx_dp().delta, 1e-3);
}

TEST(GdpComposeTest, Examples) {
  EXPECT_DOUBLE_EQ(*GdpCompose(3.0, 4.0), 5.0);
  EXPECT_DOUBLE_EQ(*GdpCompose(0.7, 0.0), 0.7);
  EXPECT_NEAR(*GdpCompose(1.0, 1.0), 1.414214, 1e-6);
  EXPECT_FALSE(GdpCompose(-1.0, 1.0).ok());
}

TEST(GdpComposeTest, CommutativeAssociativeMonotone) {
  const double grid[] = {0.0, 0.1, 0.5, 1.0, 2.5};
  for (double a : grid) {
    for (double b : grid) {
      EXPECT_EQ(*GdpCompose(a, b), *GdpCompose(b, a));
      EXPECT_LE(*GdpCompose(a, b), *GdpCompose(a + 0.1, b));
      for (double c : grid) {
        EXPECT_NEAR(*GdpCompose(*GdpCompose(a, b), c),
                    *GdpCompose(a, *GdpCompose(b, c)), 1e-12);
      }
    }
  }
}

TEST(GdpToApproxDpDeltaTest, GoldenValueAgainstSeriesOracle) {
  const long double mu = 1.0L, eps = 1.0L;
  const long double expected =
      oracle::NormalCdfSeries(-eps / mu + mu / 2) -
      std::exp(eps) * oracle::NormalCdfSeries(-eps / mu - mu / 2);
  EXPECT_NEAR(*GdpToApproxDpDelta(1.0, 1.0), static_cast<double>(expected),
              1e-12);
  EXPECT_NEAR(*GdpToApproxDpDelta(1.0, 1.0), 0.126936, 1e-4);
}

TEST(GdpToApproxDpDeltaTest, LimitsAndMonotonicity) {
  EXPECT_LE(*GdpToApproxDpDelta(1e-6, 1.0), 1e-12);
  EXPECT_LT(*GdpToApproxDpDelta(1.0, 2.0), *GdpToApproxDpDelta(1.0, 1.0));
  for (double eps : {0.1, 0.5, 1.0, 3.0}) {
    double prev = 0.0;
    for (double mu = 0.05; mu <= 4.0; mu += 0.05) {
      const double delta = *GdpToApproxDpDelta(mu, eps);
      EXPECT_GE(delta, prev);
      EXPECT_LT(delta, 1.0);
      prev = delta;
    }
  }
  EXPECT_FALSE(GdpToApproxDpDelta(0.0, 1.0).ok());
  EXPECT_FALSE(GdpToApproxDpDelta(1.0, 0.0).ok());
}

TEST(ExperimentMuTest, Examples) {
  // 4 * 0.5 / sqrt(10 * 6.907755...) = 0.2406365...
  EXPECT_NEAR(*ExperimentMu(0.5, 0.001), 0.240637, 1e-6);
  EXPECT_DOUBLE_EQ(*ExperimentMu(1.0, 0.001), 2.0 * *ExperimentMu(0.5, 0.001));
  EXPECT_NEAR(*ExperimentMu(0.5, std::exp(-10.0)), 0.2, 1e-15);
  EXPECT_FALSE(ExperimentMu(0.0, 0.1).ok());
  EXPECT_FALSE(ExperimentMu(0.5, 1.0).ok());
}

TEST(CalibratePeelingScalesTest, Examples) {
  const NoiseScales s = *CalibratePeelingScales(0.240637, 1e-4, 200);
  EXPECT_NEAR(s.sigma0, 0.0083113, 1e-6);
  EXPECT_NEAR(s.sigma1, 0.0166226, 1e-6);
  EXPECT_EQ(s.sigma1, 2.0 * s.sigma0);
  EXPECT_DOUBLE_EQ(CalibratePeelingScales(1.0, 1.0, 2)->sigma0, 2.0);
  EXPECT_FALSE(CalibratePeelingScales(1.0, 1.0, 0).ok());
  EXPECT_FALSE(CalibratePeelingScales(0.0, 1.0, 1).ok());
}

TEST(CalibratePeelingScalesTest, RatioAndSquareRootScaling) {
  for (double mu : {0.1, 0.7, 3.0}) {
    for (size_t m : {1, 7, 50, 1000}) {
      const NoiseScales s = *CalibratePeelingScales(mu, 0.01, m);
      EXPECT_EQ(s.sigma1 / s.sigma0, 2.0);
      EXPECT_DOUBLE_EQ(CalibratePeelingScales(mu, 0.01, 4 * m)->sigma0,
                       2.0 * s.sigma0);
    }
  }
}

TEST(CalibrateLaplacePeelingScalesTest, DefaultCalibration) {
  const NoiseScales s = *CalibrateLaplacePeelingScales(0.5, 1e-3, 1e-4, 200);
  const double b1 = 2.0 * std::sqrt(2.0 * 200 * std::log(1e3)) * 1e-4 / 0.5;
  EXPECT_DOUBLE_EQ(s.sigma1, b1);
  EXPECT_DOUBLE_EQ(s.sigma0, b1 / 2.0);
  EXPECT_FALSE(CalibrateLaplacePeelingScales(0.5, 0.0, 1e-4, 200).ok());
}

TEST(SplitBudgetTest, Examples) {
  const BudgetSplit half = *SplitBudget(1.0, 0.5);
  EXPECT_NEAR(half.mu_estimator, 0.707107, 1e-6);
  EXPECT_NEAR(half.mu_peeling, 0.707107, 1e-6);
  const BudgetSplit tenth = *SplitBudget(1.0, 0.1);
  EXPECT_NEAR(tenth.mu_estimator, std::sqrt(0.1), 1e-15);
  EXPECT_NEAR(tenth.mu_estimator, 0.316228, 1e-6);
  EXPECT_NEAR(tenth.mu_peeling, 0.948683, 1e-6);
  for (double mu : {0.2, 1.0, 5.0}) {
    for (double rho : {0.01, 0.1, 0.5, 0.9}) {
      const BudgetSplit s = *SplitBudget(mu, rho);
      EXPECT_NEAR(*GdpCompose(s.mu_estimator, s.mu_peeling), mu, 1e-12);
    }
  }
  EXPECT_FALSE(SplitBudget(1.0, 0.0).ok());
  EXPECT_FALSE(SplitBudget(1.0, 1.0).ok());
}

}  // namespace
}  // namespace supmt
