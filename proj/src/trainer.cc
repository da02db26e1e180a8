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

#include "asgcl/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "asgcl/errors.h"
#include "asgcl/format.h"
#include "asgcl/log.h"

namespace asgcl {

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(lr >= 0.0)) throw ConfigError("lr must be >= 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be >= 0");
  if (layers < 1) throw ConfigError("layers must be >= 1");
  if (extra_diffusions < 0) throw ConfigError("k must be >= 0");
  if (hidden < 1) throw ConfigError("hidden must be >= 1");
  for (double b : {view1_budget(), view2_budget()}) {
    if (!(b > 0.0 && b <= 1.0)) {
      throw ConfigError("view perturbation budgets must be in (0, 1]");
    }
  }
  if (augment_rounds < 1) throw ConfigError("augment rounds must be >= 1");
  if (!(augment_step >= 0.0)) throw ConfigError("augment step must be >= 0");
  if (!(augment_noise > 0.0)) throw ConfigError("augment noise must be > 0");
  loss.validate();
}

LossConfig TrainConfig::effective_loss() const {
  LossConfig out = loss;
  if (ablation.no_lower) out.use_lower = false;
  if (ablation.no_upper) out.use_upper = false;
  return out;
}

AdamState AdamState::zeros_like(const std::vector<Matrix>& weights) {
  AdamState s;
  for (const Matrix& w : weights) {
    s.first.push_back(Matrix::Zero(w.rows(), w.cols()));
    s.second.push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  return s;
}

void adam_step(std::vector<Matrix>& weights, const std::vector<Matrix>& grads,
               AdamState& state, double lr, double weight_decay) {
  if (grads.size() != weights.size() || state.first.size() != weights.size()) {
    throw std::invalid_argument("adam_step: parameter count mismatch");
  }
  for (size_t l = 0; l < weights.size(); ++l) {
    if (grads[l].rows() != weights[l].rows() ||
        grads[l].cols() != weights[l].cols()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    }
    if (!grads[l].allFinite()) {
      throw NumericError("adam_step: non-finite gradient in layer " +
                         std::to_string(l));
    }
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(AdamState::kBeta1, state.step);
  const double c2 = 1.0 - std::pow(AdamState::kBeta2, state.step);
  for (size_t l = 0; l < weights.size(); ++l) {
    Matrix g = grads[l] + weight_decay * weights[l];
    state.first[l] = AdamState::kBeta1 * state.first[l] + (1.0 - AdamState::kBeta1) * g;
    state.second[l] = AdamState::kBeta2 * state.second[l] +
                      (1.0 - AdamState::kBeta2) * g.cwiseProduct(g);
    weights[l].array() -=
        lr * (state.first[l].array() / c1) /
        ((state.second[l].array() / c2).sqrt() + AdamState::kEps);
  }
}

namespace {

// Walks a shuffled node order in batch-sized chunks; reshuffles when the
// order is exhausted, so the final chunk of a pass may be short.
class AnchorSampler {
 public:
  AnchorSampler(int n, int batch) : order_(n), batch_(batch), cursor_(n) {
    std::iota(order_.begin(), order_.end(), 0);
  }

  std::vector<int> next(Rng& rng) {
    if (cursor_ >= order_.size()) {
      rng.shuffle(std::span<int>(order_));
      cursor_ = 0;
    }
    const size_t end = std::min(order_.size(), cursor_ + batch_);
    std::vector<int> out(order_.begin() + cursor_, order_.begin() + end);
    cursor_ = end;
    return out;
  }

 private:
  std::vector<int> order_;
  size_t batch_;
  size_t cursor_;
};

std::string describe(const LossBreakdown& b) {
  std::ostringstream msg;
  msg << "infonce=" << b.infonce << " lower=" << b.lower
      << " upper=" << b.upper << " total=" << b.total;
  return msg.str();
}

}  // namespace

FitResult fit(const Graph& g, const TrainConfig& cfg) {
  cfg.validate();
  if (g.num_nodes() < 2) throw DataError("training needs at least 2 nodes");
  Rng rng(cfg.seed);
  FitResult out;
  out.weights = EncoderWeights::glorot(g.num_features(), cfg.hidden, cfg.layers,
                                       cfg.effective_extra_diffusions(), rng);
  out.adam = AdamState::zeros_like(out.weights.layers);

  const int n = g.num_nodes();
  if (cfg.ablation.no_spectral) {
    out.delta1 = uniform_delta(n, cfg.view1_budget());
    out.delta2 = uniform_delta(n, cfg.view2_budget());
  } else {
    AugmentOptions opts;
    opts.rounds = cfg.augment_rounds;
    opts.step = cfg.augment_step;
    opts.noise = cfg.augment_noise;
    opts.budget = cfg.view1_budget();
    Rng rng1(rng.fork_seed());
    AugmentResult a1 = optimize_delta(g, opts, rng1);
    opts.budget = cfg.view2_budget();
    Rng rng2(rng.fork_seed());
    AugmentResult a2 = optimize_delta(g, opts, rng2);
    out.delta1 = std::move(a1.delta);
    out.delta2 = std::move(a2.delta);
    out.trajectory1 = std::move(a1.trajectory);
    out.trajectory2 = std::move(a2.trajectory);
  }

  const LossConfig loss_cfg = cfg.effective_loss();
  const bool self_loops = !cfg.raw_diffusion;
  AnchorSampler anchors(n, loss_cfg.batch);
  DiffusionMatrix s1, s2;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (epoch == 0 || cfg.resample_each_epoch) {
      s1 = DiffusionMatrix(sample_augmented(g, out.delta1, rng).adjacency(),
                           self_loops);
      s2 = DiffusionMatrix(sample_augmented(g, out.delta2, rng).adjacency(),
                           self_loops);
    }
    std::vector<int> batch = anchors.next(rng);
    PairTape tape = forward_pair(g.features(), s1, s2, out.weights);
    LossResult loss = total_loss(tape.embeddings.h1, tape.embeddings.h2, batch,
                                 loss_cfg, rng);
    if (!std::isfinite(loss.breakdown.total)) {
      throw NumericError("non-finite loss at epoch " +
                         std::to_string(epoch + 1) + ": " +
                         describe(loss.breakdown));
    }
    std::vector<Matrix> grads = backward_pair(tape, loss.d_h1, loss.d_h2);
    try {
      adam_step(out.weights.layers, grads, out.adam, cfg.lr, cfg.weight_decay);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at epoch " +
                         std::to_string(epoch + 1) + ": " +
                         describe(loss.breakdown));
    }
    out.log.push_back(loss.breakdown);
  }
  return out;
}

void write_training_log(std::ostream& out,
                        const std::vector<LossBreakdown>& log) {
  out << "epoch,infonce,lower,upper,total\n";
  for (size_t e = 0; e < log.size(); ++e) {
    const LossBreakdown& b = log[e];
    out << (e + 1) << ',' << format_real(b.infonce) << ','
        << format_real(b.lower) << ',' << format_real(b.upper) << ','
        << format_real(b.total) << '\n';
  }
}

}  // namespace asgcl
