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

#include "supmt/random.h"

#include <cmath>

namespace supmt {
namespace {

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t MixKey(uint64_t seed, uint64_t stream_id) {
  return Mix64(Mix64(seed) ^ Mix64(stream_id ^ 0x6a09e667f3bcc909ULL));
}

RandomStream::RandomStream(uint64_t seed, uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      key_(MixKey(seed, stream_id)),
      engine_(key_) {}

RandomStream RandomStream::Split(uint64_t child_id) const {
  return RandomStream(key_, child_id);
}

double RandomStream::Uniform() {
  // 53 random mantissa bits, shifted by half an ulp away from zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::Laplace(double scale) {
  if (scale == 0.0) return 0.0;
  const double u = Uniform() - 0.5;
  return u < 0.0 ? scale * std::log1p(2.0 * u) : -scale * std::log1p(-2.0 * u);
}

uint64_t RandomStream::UniformInt(uint64_t n) {
  std::uniform_int_distribution<uint64_t> dist(0, n - 1);
  return dist(engine_);
}

}  // namespace supmt
