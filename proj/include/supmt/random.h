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

#ifndef SUPMT_RANDOM_H_
#define SUPMT_RANDOM_H_

#include <cstdint>
#include <random>

namespace supmt {

// Mixes two 64-bit words into one. Used to derive independent stream keys.
uint64_t MixKey(uint64_t seed, uint64_t stream_id);

// A deterministic source of random draws identified by (seed, stream_id).
//
// The engine state is derived from a hash of the pair, so a stream can be
// reconstructed anywhere from its identifiers alone: replicates running on
// different threads, in any order, see identical draws. Child streams are
// derived with Split() and never overlap with the parent's sequence.
//
// Instances are cheap to create and are not thread-safe; each task owns its
// own stream.
class RandomStream {
 public:
  RandomStream(uint64_t seed, uint64_t stream_id);

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

  // Returns the child stream `child_id`. Does not advance this stream.
  RandomStream Split(uint64_t child_id) const;

  uint64_t NextBits() { return engine_(); }

  // Uniform draw on the open interval (0, 1).
  double Uniform();

  // Uniform draw on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Standard normal draw.
  double Normal() { return normal_(engine_); }

  // Laplace(0, scale) draw. scale == 0 yields 0.
  double Laplace(double scale);

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

 private:
  uint64_t seed_;
  uint64_t stream_id_;
  uint64_t key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace supmt

#endif  // SUPMT_RANDOM_H_
