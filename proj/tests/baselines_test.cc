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
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace supmt {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

std::vector<double> MixedPValues(size_t m, uint64_t seed) {
  RandomStream stream(seed, 0);
  std::vector<double> p(m);
  for (double& v : p) {
    v = stream.Uniform() < 0.1 ? std::pow(stream.Uniform(), 8.0)
                               : stream.Uniform();
  }
  return p;
}

DworkParams DeskParams() {
  DworkParams params;
  params.eta = 1e-4;
  params.eps = 0.5;
  params.delta = 1e-3;
  params.m_peel = 200;
  return params;
}

TEST(ClassicProcedureTest, HandExamples) {
  const std::vector<double> p = {0.04, 0.001, 0.5, 0.02, 0.9};
  EXPECT_THAT(*ClassicProcedure(p, Family::kBH, 0.1), ElementsAre(0, 1, 3));
  EXPECT_THAT(*ClassicProcedure(p, Family::kHolm, 0.1), ElementsAre(1, 3));
  EXPECT_THAT(*ClassicProcedure(p, Family::kBonferroni, 0.1),
              ElementsAre(1, 3));
  // BY slope 0.1 / (5 * 2.2833) = 0.00876: only 0.001 qualifies.
  EXPECT_THAT(*ClassicProcedure(p, Family::kBY, 0.1), ElementsAre(1));
  EXPECT_THAT(*ClassicProcedure(std::vector<double>{0.5, 0.6}, Family::kBH,
                                0.1),
              IsEmpty());
}

TEST(ClassicProcedureTest, BhMatchesOracleAndNesting) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const std::vector<double> p = MixedPValues(400, seed);
    const std::vector<size_t> bh = *ClassicProcedure(p, Family::kBH, 0.1);
    EXPECT_EQ(bh, oracle::BenjaminiHochberg(p, 0.1));
    const std::set<size_t> bh_set(bh.begin(), bh.end());
    const std::vector<size_t> holm = *ClassicProcedure(p, Family::kHolm, 0.1);
    const std::set<size_t> holm_set(holm.begin(), holm.end());
    const std::vector<size_t> by = *ClassicProcedure(p, Family::kBY, 0.1);
    const std::vector<size_t> bonf =
        *ClassicProcedure(p, Family::kBonferroni, 0.1);
    for (size_t j : by) EXPECT_TRUE(bh_set.count(j));
    for (size_t j : bonf) EXPECT_TRUE(holm_set.count(j));
    for (size_t j : holm) EXPECT_TRUE(bh_set.count(j));
  }
}

TEST(ClassicProcedureTest, RejectsInvalidInput) {
  EXPECT_FALSE(ClassicProcedure({}, Family::kBH, 0.1).ok());
  EXPECT_FALSE(
      ClassicProcedure(std::vector<double>{0.2}, Family::kBH, 0.0).ok());
  EXPECT_FALSE(
      ClassicProcedure(std::vector<double>{-0.1}, Family::kBH, 0.1).ok());
}

TEST(DpPenaltyTest, Goldens) {
  const DworkParams params = DeskParams();
  const double expected_bh = 1e-4 *
                             std::sqrt(10.0 * 200 * std::log(1000.0) *
                                       std::log(6.0 * 200 / 0.1)) /
                             0.5;
  EXPECT_DOUBLE_EQ(DpBhPenalty(params, 0.1), expected_bh);
  EXPECT_NEAR(DpBhPenalty(params, 0.1), 0.0720456578, 1e-9);
  EXPECT_NEAR(DpBonfPenalty(params, 0.1, 20000), 0.4368848040, 1e-9);
  EXPECT_NEAR(DpBhLaplaceScale(params),
              1e-4 * std::sqrt(2000 * std::log(1000.0)) / 0.5, 1e-15);
  DworkParams fixed = params;
  fixed.laplace_scale = 0.3;
  EXPECT_EQ(DpBhLaplaceScale(fixed), 0.3);
  EXPECT_EQ(DpBonfLaplaceScale(fixed, 10), 0.3);
}

TEST(PowerDominanceConditionTest, DeskParametersSatisfyIt) {
  const DworkParams params = DeskParams();
  EXPECT_TRUE(PowerDominanceCondition(params, 0.1, 5000, DpVariant::kBH));
  EXPECT_TRUE(
      PowerDominanceCondition(params, 0.1, 5000, DpVariant::kBonferroni));
  DworkParams loose = params;
  loose.eta = 1.0;
  EXPECT_FALSE(PowerDominanceCondition(loose, 0.1, 5000, DpVariant::kBH));
  EXPECT_FALSE(
      PowerDominanceCondition(loose, 0.1, 5000, DpVariant::kBonferroni));
}

TEST(DpBhTest, NegligibleNoiseReducesToBh) {
  DworkParams params;
  params.eta = 1e-15;
  params.nu = 1e-300;
  params.laplace_scale = 1e-15;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<double> p = MixedPValues(150, 100 + seed);
    params.m_peel = p.size();
    const DpResult r = *DpBh(p, params, 0.1, RandomStream(seed, 1));
    std::vector<size_t> got = r.rejected_indices;
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, oracle::BenjaminiHochberg(p, 0.1));
  }
}

TEST(DpBonfTest, NegligibleNoiseReducesToBonferroni) {
  DworkParams params;
  params.eta = 1e-15;
  params.nu = 1e-300;
  params.laplace_scale = 1e-15;
  const std::vector<double> p = MixedPValues(120, 7);
  const DpResult r = *DpBonf(p, params, 0.1, RandomStream(2, 2));
  std::vector<size_t> got = r.rejected_indices;
  std::sort(got.begin(), got.end());
  EXPECT_EQ(got, *ClassicProcedure(p, Family::kBonferroni, 0.1));
  EXPECT_EQ(r.peeled.size(), p.size());
}

TEST(DpBhTest, ReportsCalibrationAndIsDeterministic) {
  const std::vector<double> p = MixedPValues(1000, 9);
  const DworkParams params = DeskParams();
  const DpResult a = *DpBh(p, params, 0.1, RandomStream(4, 4));
  const DpResult b = *DpBh(p, params, 0.1, RandomStream(4, 4));
  EXPECT_EQ(a.rejected_indices, b.rejected_indices);
  EXPECT_EQ(a.peeled.size(), 200u);
  EXPECT_DOUBLE_EQ(a.penalty, DpBhPenalty(params, 0.1));
  EXPECT_EQ(a.j_star, a.rejected_indices.size());
}

TEST(DpBhTest, TruncationFloorsSmallPValues) {
  DworkParams params;
  params.eta = 1e-15;
  params.laplace_scale = 1e-15;
  params.nu = 0.01;
  params.m_peel = 3;
  const std::vector<double> p = {1e-9, 0.5, 0.7};
  const DpResult r = *DpBh(p, params, 0.1, RandomStream(0, 0));
  EXPECT_NEAR(r.peeled[0].noisy_log_p, std::log(0.01), 1e-9);
}

TEST(DpBhTest, RejectsInvalidParams) {
  const std::vector<double> p = {0.1, 0.2};
  DworkParams params;
  params.m_peel = 2;
  params.eps = 0.0;
  EXPECT_FALSE(DpBh(p, params, 0.1, RandomStream(0, 0)).ok());
  params = DworkParams();
  params.m_peel = 5;
  EXPECT_FALSE(DpBh(p, params, 0.1, RandomStream(0, 0)).ok());
  params = DworkParams();
  params.nu = 0.0;
  EXPECT_FALSE(DpBonf(p, params, 0.1, RandomStream(0, 0)).ok());
}

}  // namespace
}  // namespace supmt
