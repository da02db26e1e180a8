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

#include "asgcl/harness.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "asgcl/errors.h"
#include "asgcl/format.h"
#include "asgcl/trainer.h"

namespace asgcl {

uint64_t derive_seed(uint64_t base, uint64_t index) {
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Flips `count` pairs drawn without replacement from `candidates`.
Graph flip_pairs(const Graph& g, const std::vector<Edge>& candidates,
                 long count, Rng& rng) {
  const int take = static_cast<int>(
      std::min<long>(count, static_cast<long>(candidates.size())));
  Matrix a = g.adjacency();
  for (int idx : rng.sample_without_replacement(
           static_cast<int>(candidates.size()), take)) {
    const auto [i, j] = candidates[idx];
    a(i, j) = a(j, i) = 1.0 - a(i, j);
  }
  return g.with_adjacency(std::move(a));
}

std::vector<Edge> pairs_where(const Graph& g, int want /* -1 = any */) {
  std::vector<Edge> out;
  const int n = g.num_nodes();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (want < 0 || g.adjacency()(i, j) == want) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace

Graph random_flip(const Graph& g, long flips, Rng& rng) {
  return flip_pairs(g, pairs_where(g, -1), flips, rng);
}

Graph random_add(const Graph& g, long additions, Rng& rng) {
  return flip_pairs(g, pairs_where(g, 0), additions, rng);
}

Graph random_remove(const Graph& g, long removals, Rng& rng) {
  return flip_pairs(g, pairs_where(g, 1), removals, rng);
}

long count_flips(const Graph& a, const Graph& b) {
  return static_cast<long>(
      std::llround((a.adjacency() - b.adjacency()).cwiseAbs().sum() / 2.0));
}

std::vector<SpectraRun> spectra_runs(const Graph& g,
                                     const std::vector<double>& budgets,
                                     int seeds, const AugmentOptions& base,
                                     uint64_t seed) {
  const Matrix reference = sym_norm_laplacian(g);
  auto distance_to = [&](const Graph& aug) {
    return frobenius_distance(reference, sym_norm_laplacian(aug));
  };
  std::vector<SpectraRun> runs;
  for (size_t b = 0; b < budgets.size(); ++b) {
    AugmentOptions opts = base;
    opts.budget = budgets[b];
    for (int s = 0; s < seeds; ++s) {
      Rng rng(derive_seed(seed, b * 1000003ULL + s));
      AugmentResult opt = optimize_delta(g, opts, rng);
      Graph optimized = sample_augmented(g, opt.delta, rng);
      const long flips = count_flips(g, optimized);
      runs.push_back({budgets[b], s, "optimized", flips, distance_to(optimized)});
      Graph flipped = random_flip(g, flips, rng);
      runs.push_back({budgets[b], s, "random_flip", count_flips(g, flipped),
                      distance_to(flipped)});
      Graph added = random_add(g, flips, rng);
      runs.push_back({budgets[b], s, "random_add", count_flips(g, added),
                      distance_to(added)});
      Graph removed = random_remove(g, flips, rng);
      runs.push_back({budgets[b], s, "random_remove", count_flips(g, removed),
                      distance_to(removed)});
    }
  }
  return runs;
}

std::vector<SpectraSummary> summarize_spectra(
    const std::vector<SpectraRun>& runs) {
  static const char* kMethods[] = {"optimized", "random_flip", "random_add",
                                   "random_remove"};
  std::vector<double> budgets;
  for (const SpectraRun& r : runs) {
    if (std::find(budgets.begin(), budgets.end(), r.budget) == budgets.end()) {
      budgets.push_back(r.budget);
    }
  }
  std::vector<SpectraSummary> out;
  for (double budget : budgets) {
    for (const char* method : kMethods) {
      std::vector<double> dist;
      double flips = 0.0;
      for (const SpectraRun& r : runs) {
        if (r.budget == budget && r.method == method) {
          dist.push_back(r.distance);
          flips += static_cast<double>(r.flips);
        }
      }
      if (dist.empty()) continue;
      Aggregate a = aggregate(dist);
      out.push_back({budget, method, flips / dist.size(), a.mean, a.std});
    }
  }
  return out;
}

void write_spectra_csv(std::ostream& out,
                       const std::vector<SpectraSummary>& rows) {
  out << "budget,method,mean_flips,mean_distance,std_distance\n";
  for (const SpectraSummary& r : rows) {
    out << format_real(r.budget) << ',' << r.method << ','
        << format_real(r.mean_flips) << ',' << format_real(r.mean_distance)
        << ',' << format_real(r.std_distance) << '\n';
  }
}

void write_spectra_runs_csv(std::ostream& out,
                            const std::vector<SpectraRun>& runs) {
  out << "budget,seed,method,flips,distance\n";
  for (const SpectraRun& r : runs) {
    out << format_real(r.budget) << ',' << r.seed_index << ',' << r.method
        << ',' << r.flips << ',' << format_real(r.distance) << '\n';
  }
}

Aggregate train_and_classify(const Graph& g, const TrainConfig& train,
                             const std::vector<uint64_t>& seeds) {
  FitResult fitted = fit(g, train);
  MetricReport report = evaluate(g, fitted.weights, Task::kClassification,
                                 seeds, !train.raw_diffusion);
  return report.accuracy;
}

std::vector<RobustnessRow> robustness_sweep(const Graph& g,
                                            const RunConfig& cfg) {
  const bool self_loops = !cfg.train.raw_diffusion;
  EncoderWeights clean;
  if (!cfg.robustness.retrain) clean = fit(g, cfg.train).weights;
  std::vector<RobustnessRow> rows;
  const char* modes[] = {"edge_drop", "feature_mask"};
  for (int m = 0; m < 2; ++m) {
    for (size_t r = 0; r < cfg.robustness.ratios.size(); ++r) {
      const double ratio = cfg.robustness.ratios[r];
      Rng rng(derive_seed(cfg.train.seed, 100003ULL * (m + 1) + r));
      Graph perturbed = m == 0 ? perturb_for_robustness(g, ratio, 0.0, rng)
                               : perturb_for_robustness(g, 0.0, ratio, rng);
      Aggregate acc;
      if (cfg.robustness.retrain) {
        acc = train_and_classify(perturbed, cfg.train, cfg.eval.seeds);
      } else {
        acc = evaluate(perturbed, clean, Task::kClassification, cfg.eval.seeds,
                       self_loops)
                  .accuracy;
      }
      rows.push_back({modes[m], ratio, std::move(acc)});
    }
  }
  return rows;
}

void write_robustness_csv(std::ostream& out,
                          const std::vector<RobustnessRow>& rows) {
  out << "mode,ratio,mean_accuracy,std_accuracy\n";
  for (const RobustnessRow& r : rows) {
    out << r.mode << ',' << format_real(r.ratio) << ','
        << format_real(r.accuracy.mean) << ',' << format_real(r.accuracy.std)
        << '\n';
  }
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "epsilon") return SweepParam::kBudget;
  if (name == "k") return SweepParam::kExtraDiffusions;
  if (name == "alpha-beta") return SweepParam::kMargins;
  throw UsageError("unknown sweep parameter \"" + name +
                   "\" (expected epsilon, k or alpha-beta)");
}

std::vector<SweepRow> parameter_sweep(const Graph& g, const RunConfig& cfg,
                                      SweepParam param) {
  std::vector<TrainConfig> points;
  switch (param) {
    case SweepParam::kBudget:
      for (double b : cfg.sweep.budgets) {
        TrainConfig t = cfg.train;
        t.budget = b;
        points.push_back(t);
      }
      break;
    case SweepParam::kExtraDiffusions:
      for (int k : cfg.sweep.extra_diffusions) {
        TrainConfig t = cfg.train;
        t.extra_diffusions = k;
        points.push_back(t);
      }
      break;
    case SweepParam::kMargins:
      for (double a : cfg.sweep.alphas) {
        for (double b : cfg.sweep.betas) {
          TrainConfig t = cfg.train;
          t.loss.alpha = a;
          t.loss.beta = b;
          points.push_back(t);
        }
      }
      break;
  }
  std::vector<SweepRow> rows;
  for (size_t p = 0; p < points.size(); ++p) {
    TrainConfig t = points[p];
    t.seed = derive_seed(cfg.train.seed, p);
    t.validate();
    rows.push_back({t.budget, t.extra_diffusions, t.loss.alpha, t.loss.beta,
                    train_and_classify(g, t, cfg.eval.seeds)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "epsilon,k,alpha,beta,mean_accuracy,std_accuracy\n";
  for (const SweepRow& r : rows) {
    out << format_real(r.budget) << ',' << r.extra_diffusions << ','
        << format_real(r.alpha) << ',' << format_real(r.beta) << ','
        << format_real(r.accuracy.mean) << ',' << format_real(r.accuracy.std)
        << '\n';
  }
}

}  // namespace asgcl
