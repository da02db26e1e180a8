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

#ifndef ASGCL_IO_H_
#define ASGCL_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "asgcl/graph.h"

namespace asgcl {

struct SbmParams {
  int n = 300;
  int blocks = 3;
  double p_in = 0.1;
  double p_out = 0.01;
  double feature_noise = 0.5;
  uint64_t seed = 0;

  friend bool operator==(const SbmParams&, const SbmParams&) = default;
};

struct DatasetFiles {
  std::string edges;
  std::string features;  // ".bin" selects the binary layout, anything else CSV
  std::string labels;    // optional; empty means unlabeled

  friend bool operator==(const DatasetFiles&, const DatasetFiles&) = default;
};

// Exactly one of `files` / `sbm` is set.
struct DatasetSpec {
  std::string name = "sbm";
  std::optional<DatasetFiles> files;
  std::optional<SbmParams> sbm = SbmParams{};

  void validate() const;  // throws ConfigError
  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

// Planted-partition graph. Nodes are split into contiguous blocks, the first
// n % blocks blocks taking one extra node. Each pair i < j (row-major) is an
// edge with probability p_in inside a block and p_out across blocks;
// features are the one-hot block indicator plus U(-w, w) noise, drawn after
// the edges. Throws ConfigError on invalid parameters.
Graph generate_sbm(const SbmParams& params);

// Edge list: one "i j" pair per line, 0-based, whitespace separated. Blank
// lines and lines starting with '#' are skipped. Throws DataError naming the
// line on malformed input.
std::vector<Edge> read_edge_list(const std::filesystem::path& path);

// CSV of reals (rows = nodes) or, for ".bin", two little-endian uint32 (n, d)
// followed by n*d little-endian float32 in row-major order.
Matrix read_features(const std::filesystem::path& path);
Matrix read_features_csv(const std::filesystem::path& path);
Matrix read_features_binary(const std::filesystem::path& path);

// One integer per line. Non-contiguous ids are remapped (sorted order) to
// 0..C-1 with a warning.
std::vector<int> read_labels(const std::filesystem::path& path);

// Builds the graph from files. Self-loop lines are dropped with a warning.
Graph load_dataset(const DatasetSpec& spec);

void write_edge_list(const std::filesystem::path& path, const Graph& g);
void write_features_csv(const std::filesystem::path& path, const Matrix& x);
void write_features_binary(const std::filesystem::path& path, const Matrix& x);
void write_labels(const std::filesystem::path& path,
                  const std::vector<int>& labels);

// Whole-file helpers; throw DataError on I/O failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

// Embedding export: same binary layout as the feature file.
inline void write_embeddings(const std::filesystem::path& path,
                             const Matrix& h) {
  write_features_binary(path, h);
}

}  // namespace asgcl

#endif  // ASGCL_IO_H_
