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

#ifndef ASGCL_TRAINER_H_
#define ASGCL_TRAINER_H_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "asgcl/encoder.h"
#include "asgcl/graph.h"
#include "asgcl/losses.h"
#include "asgcl/spectral_augment.h"

namespace asgcl {

struct AblationFlags {
  bool no_spectral = false;        // uniform-constant flip probabilities
  bool symmetric_encoder = false;  // forces k = 0
  bool no_upper = false;
  bool no_lower = false;

  friend bool operator==(const AblationFlags&, const AblationFlags&) = default;
};

struct TrainConfig {
  int epochs = 1000;
  double lr = 0.001;
  double weight_decay = 5e-5;
  int layers = 2;  // i
  int extra_diffusions = 2;  // k
  int hidden = 256;
  // Perturbation strength; view 1 uses view1_budget_scale * budget, view 2
  // uses view2_budget_scale * budget.
  double budget = 0.2;
  double view1_budget_scale = 0.5;
  double view2_budget_scale = 1.0;
  int augment_rounds = 5;  // T
  double augment_step = 0.5;
  double augment_noise = kDefaultNoise;
  LossConfig loss;
  uint64_t seed = 0;
  AblationFlags ablation;
  bool resample_each_epoch = true;
  bool raw_diffusion = false;  // no self-loops in the propagation operator

  // Throws ConfigError.
  void validate() const;
  double view1_budget() const { return budget * view1_budget_scale; }
  double view2_budget() const { return budget * view2_budget_scale; }
  LossConfig effective_loss() const;
  int effective_extra_diffusions() const {
    return ablation.symmetric_encoder ? 0 : extra_diffusions;
  }
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  std::vector<Matrix> first;
  std::vector<Matrix> second;
  long step = 0;

  static AdamState zeros_like(const std::vector<Matrix>& weights);
};

// Bias-corrected Adam with L2 decay folded into the gradient. Throws
// NumericError on a non-finite gradient (weights are left untouched).
void adam_step(std::vector<Matrix>& weights, const std::vector<Matrix>& grads,
               AdamState& state, double lr, double weight_decay);

struct FitResult {
  EncoderWeights weights;
  AdamState adam;
  std::vector<LossBreakdown> log;  // one entry per epoch
  FlipProbability delta1;
  FlipProbability delta2;
  std::vector<AugmentRound> trajectory1;
  std::vector<AugmentRound> trajectory2;
};

// Full training run. Random draw order from the single seeded stream:
// weight init, view-1 flip optimization, view-2 flip optimization, then per
// epoch: view masks, anchor permutation (when exhausted), negatives.
FitResult fit(const Graph& g, const TrainConfig& cfg);

// CSV "epoch,infonce,lower,upper,total" (epochs counted from 1).
void write_training_log(std::ostream& out,
                        const std::vector<LossBreakdown>& log);

}  // namespace asgcl

#endif  // ASGCL_TRAINER_H_
