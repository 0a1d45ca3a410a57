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

#include "supmt/transform.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "supmt/normal.h"

namespace supmt {
namespace {

TEST(TransformTest, CreateValidatesSensitivity) {
  EXPECT_TRUE(Transform::Create(1e-4).ok());
  EXPECT_FALSE(Transform::Create(0.0).ok());
  EXPECT_FALSE(Transform::Create(-1.0).ok());
  const Transform t = *Transform::Create(0.5);
  EXPECT_EQ(t.gs(), 0.5);
  EXPECT_NEAR(t.Apply(0.975), 1.959964, 1e-6);
}

TEST(ClampPValueTest, ClampsToOpenInterval) {
  EXPECT_EQ(ClampPValue(0.0), kPValueFloor);
  EXPECT_EQ(ClampPValue(1.0), 1.0 - kPValueFloor);
  EXPECT_EQ(ClampPValue(0.3), 0.3);
  EXPECT_TRUE(std::isfinite(LatentScore(0.0)));
  EXPECT_TRUE(std::isfinite(LatentScore(1.0)));
}

TEST(NoisyPGaussianTest, Examples) {
  EXPECT_EQ(NoisyPGaussian(0.37, 0.0, 0.0), 0.37);
  EXPECT_NEAR(NoisyPGaussian(0.5, 1.0, 0.0), 0.5, 1e-15);
  // Phi(-2.326348 / sqrt(2)) = Phi(-1.644976) = 0.0499873...
  const long double q = oracle::NormalQuantileBisect(0.01L);
  const double expected =
      static_cast<double>(oracle::NormalCdfSeries(q / std::sqrt(2.0L)));
  EXPECT_NEAR(NoisyPGaussian(0.01, 1.0, 0.0), expected, 1e-12);
  EXPECT_NEAR(NoisyPGaussian(0.01, 1.0, 0.0), 0.049988, 1e-5);
}

TEST(NoisyPGaussianTest, StrictlyMonotoneInPAndZ) {
  for (double sigma : {0.01, 1.0, 5.0}) {
    for (double z : {-2.0, 0.0, 3.0}) {
      double prev = 0.0;
      for (double p = 1e-6; p < 1.0; p += 0.013) {
        const double v = NoisyPGaussian(p, sigma, z);
        EXPECT_GT(v, prev);
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
        prev = v;
      }
    }
    double prev = 0.0;
    for (double z = -3.0; z <= 3.0; z += 0.1) {
      const double v = NoisyPGaussian(0.2, sigma, z);
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(NoisyPLaplaceTest, Examples) {
  EXPECT_NEAR(*NoisyPLaplace(0.5, 1.0, 0.0), 0.5, 1e-15);
  for (double p : {0.001, 0.05, 0.3, 0.8}) {
    EXPECT_NEAR(*NoisyPLaplace(p, 1e-6, 0.0), p, 1e-5);
  }
  const double q = static_cast<double>(oracle::NormalQuantileBisect(0.01L));
  EXPECT_NEAR(*NoisyPLaplace(0.01, 1.0, 0.0),
              static_cast<double>(oracle::NormalLaplaceCdfQuadrature(q, 1.0)),
              1e-9);
  EXPECT_FALSE(NoisyPLaplace(0.1, 0.0, 0.0).ok());
}

TEST(NoisyPLaplaceTest, MonotoneInPAndZ) {
  double prev = 0.0;
  for (double p = 1e-6; p < 1.0; p += 0.017) {
    const double v = *NoisyPLaplace(p, 0.7, 0.4);
    EXPECT_GT(v, prev);
    prev = v;
  }
  prev = 0.0;
  for (double z = -4.0; z <= 4.0; z += 0.2) {
    const double v = *NoisyPLaplace(0.4, 0.7, z);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(NoisyPValueTest, UniformInputStaysUniform) {
  // Smaller-sample version of the super-uniformity check; the acceptance
  // suite runs the full one.
  const int n = 100'000;
  for (NoiseKind kind : {NoiseKind::kGaussian, NoiseKind::kLaplace}) {
    RandomStream stream(17, static_cast<uint64_t>(kind));
    std::vector<double> values(n);
    for (double& v : values) {
      const double p = stream.Uniform();
      const double z = DrawNoise(stream, 1.0, kind);
      v = NoisyPValue(p, LatentScore(p), 1.0, z, kind);
    }
    std::sort(values.begin(), values.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      ks = std::max({ks, std::abs(values[i] - static_cast<double>(i) / n),
                     std::abs(values[i] - static_cast<double>(i + 1) / n)});
    }
    // 1% critical value 1.628 / sqrt(n).
    EXPECT_LT(ks, 1.628 / std::sqrt(static_cast<double>(n)));
  }
}

TEST(DrawNoiseTest, ZeroScaleConsumesNothing) {
  RandomStream a(1, 2);
  RandomStream b(1, 2);
  EXPECT_EQ(DrawNoise(a, 0.0, NoiseKind::kGaussian), 0.0);
  EXPECT_EQ(DrawNoise(a, 0.0, NoiseKind::kLaplace), 0.0);
  EXPECT_EQ(a.NextBits(), b.NextBits());
}

TEST(GenerateNoisyMatrixTest, ZeroScalesReproduceInput) {
  const std::vector<double> p = {0.2, 0.01, 0.7, 0.5};
  const NoisyMatrix matrix =
      *GenerateNoisyMatrix(p, 3, {0.0, 0.0}, RandomStream(1, 1),
                           NoiseKind::kGaussian);
  ASSERT_EQ(matrix.num_rows(), 4u);
  for (size_t k = 0; k < matrix.num_rows(); ++k) {
    for (size_t j = 0; j < p.size(); ++j) EXPECT_EQ(matrix.at(k, j), p[j]);
  }
}

TEST(GenerateNoisyMatrixTest, ShapeDeterminismAndRange) {
  const std::vector<double> p = {0.3, 0.6, 0.9};
  for (NoiseKind kind : {NoiseKind::kGaussian, NoiseKind::kLaplace}) {
    const NoisyMatrix a =
        *GenerateNoisyMatrix(p, 2, {0.5, 1.0}, RandomStream(4, 4), kind);
    const NoisyMatrix b =
        *GenerateNoisyMatrix(p, 2, {0.5, 1.0}, RandomStream(4, 4), kind);
    EXPECT_EQ(a.num_rows(), 3u);
    EXPECT_EQ(a.num_cols(), 3u);
    EXPECT_EQ(a.peel_count(), 2u);
    std::vector<double> seen;
    for (size_t k = 0; k < 3; ++k) {
      for (size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(a.at(k, j), b.at(k, j));
        EXPECT_GT(a.at(k, j), 0.0);
        EXPECT_LT(a.at(k, j), 1.0);
        seen.push_back(a.at(k, j));
      }
    }
    // Nine distinct draws.
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(std::unique(seen.begin(), seen.end()), seen.end());
  }
}

TEST(GenerateNoisyMatrixTest, InferenceRowMatchesRowZero) {
  std::vector<double> p(50);
  RandomStream src(8, 8);
  for (double& v : p) v = src.Uniform();
  const RandomStream stream(99, 1);
  const NoisyMatrix matrix =
      *GenerateNoisyMatrix(p, 5, {0.3, 0.6}, stream, NoiseKind::kGaussian);
  const std::vector<double> row0 =
      GenerateInferenceRow(p, 0.3, stream, NoiseKind::kGaussian);
  for (size_t j = 0; j < p.size(); ++j) EXPECT_EQ(row0[j], matrix.at(0, j));
}

TEST(GenerateNoisyMatrixTest, RejectsBadInput) {
  EXPECT_FALSE(GenerateNoisyMatrix({}, 1, {0.1, 0.2}, RandomStream(0, 0),
                                   NoiseKind::kGaussian)
                   .ok());
  const std::vector<double> p = {0.5};
  EXPECT_FALSE(GenerateNoisyMatrix(p, 0, {0.1, 0.2}, RandomStream(0, 0),
                                   NoiseKind::kGaussian)
                   .ok());
}

}  // namespace
}  // namespace supmt
