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

#ifndef ASGCL_CHECKPOINT_H_
#define ASGCL_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "asgcl/encoder.h"
#include "asgcl/trainer.h"

namespace asgcl {

// Binary layout, all integers little-endian:
//   "ASGCL1"            6-byte magic
//   u32 version         currently 1
//   u64 seed
//   u32 length, bytes   run configuration as JSON text
//   u32 layers, i32 k
//   per layer: u32 rows, u32 cols, rows*cols f64 (row-major)
//   i64 adam step, then per layer first and second moments (f64, row-major)
struct Checkpoint {
  EncoderWeights weights;
  AdamState adam;
  std::string config_json;
  uint64_t seed = 0;
};

inline constexpr char kCheckpointMagic[] = "ASGCL1";
inline constexpr uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const Checkpoint& ckpt);
// Throws DataError on a bad magic, unknown version or truncated payload.
Checkpoint decode_checkpoint(const std::string& bytes);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace asgcl

#endif  // ASGCL_CHECKPOINT_H_
