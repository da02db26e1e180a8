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

#include "asgcl/rng.h"

#include <numeric>
#include <stdexcept>

namespace asgcl {

uint64_t Rng::uniform_int(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_int: bound must be > 0");
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k < 0 || k > n) {
    throw std::invalid_argument("sample_without_replacement: k out of range");
  }
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  // Partial Fisher-Yates from the front.
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(uniform_int(static_cast<uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace asgcl
