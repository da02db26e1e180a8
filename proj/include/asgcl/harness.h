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

#ifndef ASGCL_HARNESS_H_
#define ASGCL_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "asgcl/config.h"
#include "asgcl/evaluation.h"
#include "asgcl/graph.h"
#include "asgcl/rng.h"
#include "asgcl/spectral_augment.h"

namespace asgcl {

// splitmix64 of base + index; gives every sweep point its own stream.
uint64_t derive_seed(uint64_t base, uint64_t index);

// Structure-only baselines at an exact flip count (capped by availability).
Graph random_flip(const Graph& g, long flips, Rng& rng);
Graph random_add(const Graph& g, long additions, Rng& rng);
Graph random_remove(const Graph& g, long removals, Rng& rng);

// Number of unordered pairs whose adjacency differs.
long count_flips(const Graph& a, const Graph& b);

// ---- Laplacian distance comparison -----------------------------------------

struct SpectraRun {
  double budget = 0.0;
  int seed_index = 0;
  std::string method;  // optimized | random_flip | random_add | random_remove
  long flips = 0;
  double distance = 0.0;
};

struct SpectraSummary {
  double budget = 0.0;
  std::string method;
  double mean_flips = 0.0;
  double mean_distance = 0.0;
  double std_distance = 0.0;
};

// For each budget and seed: optimize flip probabilities, draw one augmented
// graph, then apply each random baseline with the same realized flip count.
// Distances are ||Lap(A) - Lap(A~)||_F.
std::vector<SpectraRun> spectra_runs(const Graph& g,
                                     const std::vector<double>& budgets,
                                     int seeds, const AugmentOptions& base,
                                     uint64_t seed);
// Four rows per budget, methods in the order listed above.
std::vector<SpectraSummary> summarize_spectra(const std::vector<SpectraRun>& runs);

void write_spectra_csv(std::ostream& out,
                       const std::vector<SpectraSummary>& rows);
void write_spectra_runs_csv(std::ostream& out,
                            const std::vector<SpectraRun>& runs);

// ---- Robustness ------------------------------------------------------------

struct RobustnessRow {
  std::string mode;  // edge_drop | feature_mask
  double ratio = 0.0;
  Aggregate accuracy;
};

// Trains once on the clean graph (or per point when settings.retrain) and
// scores node classification on each perturbed graph.
std::vector<RobustnessRow> robustness_sweep(const Graph& g,
                                            const RunConfig& cfg);
void write_robustness_csv(std::ostream& out,
                          const std::vector<RobustnessRow>& rows);

// ---- Parameter sweeps ------------------------------------------------------

enum class SweepParam { kBudget, kExtraDiffusions, kMargins };
SweepParam parse_sweep_param(const std::string& name);  // throws UsageError

struct SweepRow {
  double budget = 0.0;
  int extra_diffusions = 0;
  double alpha = 0.0;
  double beta = 0.0;
  Aggregate accuracy;
};

std::vector<SweepRow> parameter_sweep(const Graph& g, const RunConfig& cfg,
                                      SweepParam param);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Training + classification with the run's eval seeds.
Aggregate train_and_classify(const Graph& g, const TrainConfig& train,
                             const std::vector<uint64_t>& seeds);

}  // namespace asgcl

#endif  // ASGCL_HARNESS_H_
