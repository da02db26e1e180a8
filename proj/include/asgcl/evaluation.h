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

#ifndef ASGCL_EVALUATION_H_
#define ASGCL_EVALUATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "asgcl/encoder.h"
#include "asgcl/graph.h"
#include "asgcl/rng.h"

namespace asgcl {

struct Split {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;
};

struct SplitProportions {
  double train = 0.1;
  double val = 0.1;
  double test = 0.8;
};

// Uniform random partition. Train and val sizes are floor(p * n); test gets
// the remainder. Throws DataError for n < 10, ConfigError if the
// proportions do not sum to 1.
Split make_split(int n, const SplitProportions& proportions, uint64_t seed);

struct LinearProbeOptions {
  double lr = 0.01;
  int steps = 300;
  int max_split_redraws = 100;
};

// Softmax regression on frozen, column-standardized embeddings, trained with
// full-batch Adam on the train mask. Reports test accuracy at the step with
// the best validation accuracy (earliest on ties).
double linear_probe(const Matrix& embeddings, const std::vector<int>& labels,
                    const Split& split, const LinearProbeOptions& opts = {});

// Draws a split from `seed` (re-drawing while any class is missing from the
// train mask) and runs the probe.
double linear_probe(const Matrix& embeddings, const std::vector<int>& labels,
                    uint64_t seed, const LinearProbeOptions& opts = {});

// Optimal one-to-one assignment minimizing total cost on a square matrix.
// Returns assignment[row] = column.
std::vector<int> hungarian(const Matrix& cost);

struct ClusterScores {
  double accuracy = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double fscore = 0.0;
};

// External scores of a predicted clustering against ground truth.
ClusterScores score_clustering(const std::vector<int>& truth,
                               const std::vector<int>& predicted);
double clustering_accuracy(const std::vector<int>& truth,
                           const std::vector<int>& predicted);
double normalized_mutual_info(const std::vector<int>& a,
                              const std::vector<int>& b);
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);
double matched_macro_f1(const std::vector<int>& truth,
                        const std::vector<int>& predicted);

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  int max_reseeds = 5;
};

struct KMeansResult {
  std::vector<int> assignment;
  Matrix centroids;
  double inertia = 0.0;
};

// Lloyd iterations from k-means++ seeding; best of `restarts` by inertia.
KMeansResult kmeans(const Matrix& points, int k, Rng& rng,
                    const KMeansOptions& opts = {});

// k-means with k = num_classes scored against labels.
ClusterScores cluster_metrics(const Matrix& embeddings,
                              const std::vector<int>& labels, int num_classes,
                              uint64_t seed, const KMeansOptions& opts = {});

// Removes floor(edge_drop * |E|) uniformly chosen edges and zeroes
// floor(feature_mask * d) uniformly chosen feature columns. Ratios must lie
// in [0, 0.8].
Graph perturb_for_robustness(const Graph& g, double edge_drop,
                             double feature_mask, Rng& rng);

struct Aggregate {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::vector<double> per_seed;
};
Aggregate aggregate(std::vector<double> values);

enum class Task { kClassification, kClustering };
std::string to_string(Task task);

struct MetricReport {
  Task task = Task::kClassification;
  std::vector<uint64_t> seeds;
  // Classification fills accuracy only; clustering fills all four.
  Aggregate accuracy;
  Aggregate nmi;
  Aggregate ari;
  Aggregate fscore;
};

// Embeds the unaugmented graph with the view-1 composition and runs the task
// once per seed.
MetricReport evaluate(const Graph& g, const EncoderWeights& weights, Task task,
                      const std::vector<uint64_t>& seeds,
                      bool self_loops = true);

// Same protocol on a precomputed embedding (e.g. raw features).
MetricReport evaluate_embeddings(const Matrix& embeddings,
                                 const std::vector<int>& labels, Task task,
                                 const std::vector<uint64_t>& seeds);

}  // namespace asgcl

#endif  // ASGCL_EVALUATION_H_
