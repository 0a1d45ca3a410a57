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

#include "supmt/peeling.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace supmt {
namespace {

using ::testing::ElementsAre;

NoisyMatrix MatrixFromRows(const std::vector<std::vector<double>>& rows) {
  NoisyMatrix matrix(rows.size(), rows[0].size(), {0.0, 0.0},
                     NoiseKind::kGaussian);
  for (size_t k = 0; k < rows.size(); ++k) {
    std::copy(rows[k].begin(), rows[k].end(), matrix.mutable_row(k).begin());
  }
  return matrix;
}

std::vector<double> RandomPValues(size_t m, uint64_t seed) {
  RandomStream stream(seed, 0);
  std::vector<double> p(m);
  for (double& v : p) v = stream.Uniform();
  return p;
}

TEST(ReversedPeelTest, HandTracedExample) {
  const NoisyMatrix matrix = MatrixFromRows({{0.9, 0.8, 0.7},
                                             {0.3, 0.1, 0.2},
                                             {0.05, 0.5, 0.4}});
  const PeelOutcome out = *ReversedPeel(matrix);
  // Round 1 takes column 1 (0.1); round 2 takes column 0 (0.05).
  EXPECT_THAT(out.peeled_indices, ElementsAre(1, 0));
  EXPECT_THAT(out.inference_pvals, ElementsAre(0.8, 0.9));
}

TEST(ReversedPeelTest, SingleRoundTakesRowOneArgmin) {
  const NoisyMatrix matrix =
      MatrixFromRows({{0.5, 0.5, 0.5, 0.5}, {0.4, 0.3, 0.02, 0.6}});
  EXPECT_THAT(ReversedPeel(matrix)->peeled_indices, ElementsAre(2));
}

TEST(ReversedPeelTest, TiesGoToSmallestIndex) {
  const NoisyMatrix matrix =
      MatrixFromRows({{0.5, 0.5, 0.5}, {0.2, 0.1, 0.1}, {0.3, 0.3, 0.3}});
  EXPECT_THAT(ReversedPeel(matrix)->peeled_indices, ElementsAre(1, 0));
}

TEST(ReversedPeelTest, ZeroNoisePeelsInRankOrder) {
  const std::vector<double> p = RandomPValues(40, 3);
  const NoisyMatrix matrix = *GenerateNoisyMatrix(
      p, 15, {0.0, 0.0}, RandomStream(1, 1), NoiseKind::kGaussian);
  std::vector<size_t> order(p.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return p[a] < p[b]; });
  order.resize(15);
  EXPECT_EQ(ReversedPeel(matrix)->peeled_indices, order);
}

TEST(ReversedPeelTest, RejectsDegenerateShapes) {
  EXPECT_FALSE(ReversedPeel(MatrixFromRows({{0.1, 0.2}})).ok());
  EXPECT_FALSE(
      ReversedPeel(MatrixFromRows({{0.1}, {0.2}, {0.3}})).ok());  // m' > m
}

TEST(ReversedPeelTest, OutputIndicesDistinctAndRowZeroValues) {
  const std::vector<double> p = RandomPValues(30, 9);
  const NoisyMatrix matrix = *GenerateNoisyMatrix(
      p, 30, {0.4, 0.8}, RandomStream(2, 2), NoiseKind::kLaplace);
  const PeelOutcome out = *ReversedPeel(matrix);
  ASSERT_EQ(out.peeled_indices.size(), 30u);
  EXPECT_EQ(std::set<size_t>(out.peeled_indices.begin(),
                             out.peeled_indices.end())
                .size(),
            30u);
  for (size_t k = 0; k < out.peeled_indices.size(); ++k) {
    EXPECT_EQ(out.inference_pvals[k], matrix.at(0, out.peeled_indices[k]));
  }
}

TEST(ReversedPeelTest, PermutingColumnsPermutesPeeledIndices) {
  const std::vector<double> p = RandomPValues(25, 4);
  const NoisyMatrix matrix = *GenerateNoisyMatrix(
      p, 10, {0.5, 1.0}, RandomStream(6, 6), NoiseKind::kGaussian);
  std::vector<size_t> perm(p.size());
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::reverse(perm.begin(), perm.end());
  NoisyMatrix permuted(matrix.num_rows(), matrix.num_cols(), matrix.scales(),
                       matrix.kind());
  for (size_t k = 0; k < matrix.num_rows(); ++k) {
    for (size_t j = 0; j < p.size(); ++j) {
      permuted.mutable_row(k)[perm[j]] = matrix.at(k, j);
    }
  }
  const PeelOutcome a = *ReversedPeel(matrix);
  const PeelOutcome b = *ReversedPeel(permuted);
  for (size_t k = 0; k < a.peeled_indices.size(); ++k) {
    EXPECT_EQ(b.peeled_indices[k], perm[a.peeled_indices[k]]);
  }
}

TEST(ReversedPeelTest, LatentFastPathMatchesFullMatrix) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<double> p = RandomPValues(60, seed);
    for (NoiseKind kind : {NoiseKind::kGaussian, NoiseKind::kLaplace}) {
      const NoiseScales scales{0.3, 0.6};
      const RandomStream stream(seed, 77);
      const PeelOutcome slow = *ReversedPeel(
          *GenerateNoisyMatrix(p, 20, scales, stream, kind));
      const PeelOutcome fast =
          *ReversedPeelFromPValues(p, 20, scales, stream, kind);
      EXPECT_EQ(slow.peeled_indices, fast.peeled_indices);
      EXPECT_EQ(slow.inference_pvals, fast.inference_pvals);
    }
  }
}

TEST(ReversedPeelTest, PeeledOrderStatisticsDominateFullRow) {
  for (uint64_t seed = 0; seed < 120; ++seed) {
    const std::vector<double> p = RandomPValues(80, 1000 + seed);
    const NoisyMatrix matrix = *GenerateNoisyMatrix(
        p, 25, {0.5, 1.0}, RandomStream(seed, 5), NoiseKind::kGaussian);
    const PeelOutcome out = *ReversedPeel(matrix);
    std::vector<double> peeled = out.inference_pvals;
    std::vector<double> full(matrix.row(0).begin(), matrix.row(0).end());
    std::sort(peeled.begin(), peeled.end());
    std::sort(full.begin(), full.end());
    for (size_t j = 0; j < peeled.size(); ++j) {
      ASSERT_LE(full[j], peeled[j]) << "seed " << seed << " j " << j;
    }
  }
}

TEST(ForwardPeelBaselineTest, TinyScalePeelsInOrder) {
  const std::vector<double> logs = {-1.0, -5.0, -0.5, -3.0, -2.0};
  const std::vector<ForwardPeel> out =
      *ForwardPeelBaseline(logs, 5, 1e-12, RandomStream(1, 1));
  std::vector<size_t> indices;
  for (const ForwardPeel& f : out) indices.push_back(f.index);
  EXPECT_THAT(indices, ElementsAre(1, 3, 4, 0, 2));
  EXPECT_NEAR(out[0].noisy_log_p, -5.0, 1e-9);
}

TEST(ForwardPeelBaselineTest, ExhaustionGivesPermutationAndIsDeterministic) {
  std::vector<double> logs(30);
  RandomStream src(2, 2);
  for (double& v : logs) v = std::log(src.Uniform());
  const auto a = *ForwardPeelBaseline(logs, 30, 0.5, RandomStream(3, 3));
  const auto b = *ForwardPeelBaseline(logs, 30, 0.5, RandomStream(3, 3));
  std::set<size_t> seen;
  for (size_t i = 0; i < a.size(); ++i) {
    seen.insert(a[i].index);
    EXPECT_EQ(a[i].index, b[i].index);
    EXPECT_EQ(a[i].noisy_log_p, b[i].noisy_log_p);
  }
  EXPECT_EQ(seen.size(), 30u);
}

TEST(ForwardPeelBaselineTest, RejectsBadArguments) {
  const std::vector<double> logs = {-1.0, -2.0};
  EXPECT_FALSE(ForwardPeelBaseline(logs, 1, 0.0, RandomStream(0, 0)).ok());
  EXPECT_FALSE(ForwardPeelBaseline(logs, 3, 1.0, RandomStream(0, 0)).ok());
}

}  // namespace
}  // namespace supmt
