// Copyright 2026 The asgcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASGCL_RNG_H_
#define ASGCL_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace asgcl {

// Seeded random source. The engine output is fixed by the standard; the
// transforms below are written out so that streams are bit-identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  uint64_t uniform_int(uint64_t bound);

  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates, drawing from the back.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // k distinct values from [0, n) in draw order.
  std::vector<int> sample_without_replacement(int n, int k);

  // Derives an independent child seed; advances this stream by one draw.
  uint64_t fork_seed() { return engine_() ^ 0x9e3779b97f4a7c15ULL; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace asgcl

#endif  // ASGCL_RNG_H_
