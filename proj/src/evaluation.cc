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

#include "asgcl/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "asgcl/errors.h"
#include "asgcl/log.h"

namespace asgcl {

Split make_split(int n, const SplitProportions& p, uint64_t seed) {
  if (n < 10) throw DataError("split needs at least 10 nodes");
  if (p.train < 0 || p.val < 0 || p.test < 0 ||
      std::abs(p.train + p.val + p.test - 1.0) > 1e-9) {
    throw ConfigError("split proportions must be nonnegative and sum to 1");
  }
  Rng rng(seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<int>(order));
  const int n_train = static_cast<int>(std::floor(p.train * n + 1e-9));
  const int n_val = static_cast<int>(std::floor(p.val * n + 1e-9));
  Split s;
  s.train.assign(order.begin(), order.begin() + n_train);
  s.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  s.test.assign(order.begin() + n_train + n_val, order.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

namespace {

int class_count(const std::vector<int>& labels) {
  if (labels.empty()) return 0;
  const int hi = *std::max_element(labels.begin(), labels.end());
  if (*std::min_element(labels.begin(), labels.end()) < 0) {
    throw DataError("labels must be nonnegative");
  }
  return hi + 1;
}

Matrix standardize_columns(const Matrix& x) {
  Matrix out = x.rowwise() - x.colwise().mean();
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    const double sd = std::sqrt(out.col(c).squaredNorm() / out.rows());
    if (sd > 1e-12) out.col(c) /= sd;
  }
  return out;
}

Matrix gather_rows(const Matrix& x, const std::vector<int>& rows) {
  Matrix out(rows.size(), x.cols());
  for (size_t r = 0; r < rows.size(); ++r) out.row(r) = x.row(rows[r]);
  return out;
}

double accuracy_of(const Matrix& logits, const std::vector<int>& labels,
                   const std::vector<int>& rows) {
  if (rows.empty()) return 0.0;
  int correct = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    Eigen::Index arg;
    logits.row(r).maxCoeff(&arg);
    if (arg == labels[rows[r]]) ++correct;
  }
  return static_cast<double>(correct) / rows.size();
}

bool covers_all_classes(const std::vector<int>& rows,
                        const std::vector<int>& labels, int classes) {
  std::vector<bool> seen(classes, false);
  for (int r : rows) seen[labels[r]] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace

double linear_probe(const Matrix& embeddings, const std::vector<int>& labels,
                    const Split& split, const LinearProbeOptions& opts) {
  if (static_cast<Eigen::Index>(labels.size()) != embeddings.rows()) {
    throw DataError("linear_probe: one label per node is required");
  }
  const int classes = class_count(labels);
  if (classes < 2) throw DataError("linear_probe: need at least two classes");
  if (split.train.empty()) throw DataError("linear_probe: empty train mask");

  Matrix x = standardize_columns(embeddings);
  Matrix x_train = gather_rows(x, split.train);
  Matrix x_val = gather_rows(x, split.val);
  Matrix x_test = gather_rows(x, split.test);
  Matrix onehot = Matrix::Zero(split.train.size(), classes);
  for (size_t r = 0; r < split.train.size(); ++r) {
    onehot(r, labels[split.train[r]]) = 1.0;
  }

  const Eigen::Index m = x.cols();
  Matrix w = Matrix::Zero(m, classes);
  Eigen::RowVectorXd bias = Eigen::RowVectorXd::Zero(classes);
  Matrix mw = w, vw = w;
  Eigen::RowVectorXd mb = bias, vb = bias;
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const double inv_n = 1.0 / static_cast<double>(split.train.size());

  double best_val = -1.0;
  double test_at_best = 0.0;
  for (int step = 1; step <= opts.steps; ++step) {
    Matrix logits = (x_train * w).rowwise() + bias;
    Eigen::VectorXd peak = logits.rowwise().maxCoeff();
    Matrix prob = (logits.colwise() - peak).array().exp().matrix();
    prob.array().colwise() /= prob.rowwise().sum().array();
    Matrix d_logits = (prob - onehot) * inv_n;
    Matrix gw = x_train.transpose() * d_logits;
    Eigen::RowVectorXd gb = d_logits.colwise().sum();

    const double c1 = 1.0 - std::pow(b1, step);
    const double c2 = 1.0 - std::pow(b2, step);
    mw = b1 * mw + (1 - b1) * gw;
    vw = b2 * vw + (1 - b2) * gw.cwiseProduct(gw);
    mb = b1 * mb + (1 - b1) * gb;
    vb = b2 * vb + (1 - b2) * gb.cwiseProduct(gb);
    w.array() -= opts.lr * (mw.array() / c1) / ((vw.array() / c2).sqrt() + eps);
    bias.array() -=
        opts.lr * (mb.array() / c1) / ((vb.array() / c2).sqrt() + eps);

    const Matrix& val_source = split.val.empty() ? x_train : x_val;
    const std::vector<int>& val_rows = split.val.empty() ? split.train : split.val;
    const double val_acc =
        accuracy_of((val_source * w).rowwise() + bias, labels, val_rows);
    if (val_acc > best_val) {
      best_val = val_acc;
      test_at_best = accuracy_of((x_test * w).rowwise() + bias, labels, split.test);
    }
  }
  return test_at_best;
}

double linear_probe(const Matrix& embeddings, const std::vector<int>& labels,
                    uint64_t seed, const LinearProbeOptions& opts) {
  const int classes = class_count(labels);
  const int n = static_cast<int>(embeddings.rows());
  for (int attempt = 0; attempt <= opts.max_split_redraws; ++attempt) {
    const uint64_t split_seed = seed + 0x9e3779b97f4a7c15ULL * attempt;
    Split split = make_split(n, {}, split_seed);
    if (covers_all_classes(split.train, labels, classes)) {
      return linear_probe(embeddings, labels, split, opts);
    }
    std::ostringstream msg;
    msg << "split for seed " << seed << " misses a class in train; redrawing";
    log_info(msg.str());
  }
  throw DataError("could not draw a split covering every class");
}

std::vector<int> hungarian(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("hungarian: not square");
  // Shortest augmenting paths with row/column potentials; 1-based.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[col0] = true;
      const int r0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double cur = cost(r0 - 1, c - 1) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int c = 1; c <= n; ++c) {
    if (match[c] != 0) assignment[match[c] - 1] = c - 1;
  }
  return assignment;
}

namespace {

void check_pair(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("label vectors must be nonempty and equal size");
  }
}

// counts(i, j) = #{t : a_t = i, b_t = j}, padded to a square.
Matrix contingency(const std::vector<int>& a, const std::vector<int>& b,
                   bool square) {
  int ra = class_count(a);
  int rb = class_count(b);
  if (square) ra = rb = std::max(ra, rb);
  Matrix counts = Matrix::Zero(ra, rb);
  for (size_t t = 0; t < a.size(); ++t) counts(a[t], b[t]) += 1.0;
  return counts;
}

// cluster -> class mapping maximizing agreement.
std::vector<int> match_clusters(const std::vector<int>& truth,
                                const std::vector<int>& predicted) {
  Matrix counts = contingency(predicted, truth, true);
  return hungarian(-counts);
}

double entropy(const Eigen::VectorXd& counts, double n) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (counts(i) > 0) h -= counts(i) / n * std::log(counts(i) / n);
  }
  return h;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double clustering_accuracy(const std::vector<int>& truth,
                           const std::vector<int>& predicted) {
  check_pair(truth, predicted);
  std::vector<int> mapping = match_clusters(truth, predicted);
  int correct = 0;
  for (size_t t = 0; t < truth.size(); ++t) {
    if (mapping[predicted[t]] == truth[t]) ++correct;
  }
  return static_cast<double>(correct) / truth.size();
}

double normalized_mutual_info(const std::vector<int>& a,
                              const std::vector<int>& b) {
  check_pair(a, b);
  Matrix counts = contingency(a, b, false);
  const double n = static_cast<double>(a.size());
  Eigen::VectorXd ca = counts.rowwise().sum();
  Eigen::VectorXd cb = counts.colwise().sum().transpose();
  const double ha = entropy(ca, n);
  const double hb = entropy(cb, n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double mi = 0.0;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      const double c = counts(i, j);
      if (c > 0) mi += c / n * std::log(c * n / (ca(i) * cb(j)));
    }
  }
  const double denom = 0.5 * (ha + hb);
  return std::clamp(mi / denom, 0.0, 1.0);
}

double adjusted_rand_index(const std::vector<int>& a,
                           const std::vector<int>& b) {
  check_pair(a, b);
  Matrix counts = contingency(a, b, false);
  const double n = static_cast<double>(a.size());
  double sum_cells = 0.0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    sum_cells += comb2(counts.data()[i]);
  }
  double sum_a = 0.0, sum_b = 0.0;
  Eigen::VectorXd ca = counts.rowwise().sum();
  Eigen::VectorXd cb = counts.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < ca.size(); ++i) sum_a += comb2(ca(i));
  for (Eigen::Index j = 0; j < cb.size(); ++j) sum_b += comb2(cb(j));
  const double expected = sum_a * sum_b / comb2(n);
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (sum_cells - expected) / (max_index - expected);
}

double matched_macro_f1(const std::vector<int>& truth,
                        const std::vector<int>& predicted) {
  check_pair(truth, predicted);
  std::vector<int> mapping = match_clusters(truth, predicted);
  const int classes = class_count(truth);
  std::vector<double> tp(classes, 0.0), pred_count(classes, 0.0),
      true_count(classes, 0.0);
  for (size_t t = 0; t < truth.size(); ++t) {
    const int mapped = mapping[predicted[t]];
    true_count[truth[t]] += 1.0;
    if (mapped < classes) pred_count[mapped] += 1.0;
    if (mapped == truth[t]) tp[truth[t]] += 1.0;
  }
  double f1_sum = 0.0;
  int present = 0;
  for (int c = 0; c < classes; ++c) {
    if (true_count[c] == 0) continue;
    ++present;
    if (tp[c] == 0) continue;
    const double precision = tp[c] / pred_count[c];
    const double recall = tp[c] / true_count[c];
    f1_sum += 2.0 * precision * recall / (precision + recall);
  }
  return present ? f1_sum / present : 0.0;
}

ClusterScores score_clustering(const std::vector<int>& truth,
                               const std::vector<int>& predicted) {
  return {clustering_accuracy(truth, predicted),
          normalized_mutual_info(truth, predicted),
          adjusted_rand_index(truth, predicted),
          matched_macro_f1(truth, predicted)};
}

namespace {

struct LloydOutcome {
  std::vector<int> assignment;
  Matrix centroids;
  double inertia;
};

int nearest(const Matrix& centroids, const Eigen::RowVectorXd& x, double* dist) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double d = (centroids.row(c) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (dist) *dist = best_d;
  return best;
}

Matrix plus_plus_seeds(const Matrix& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Matrix centroids(k, x.cols());
  centroids.row(0) = x.row(static_cast<Eigen::Index>(rng.uniform_int(n)));
  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i) = (x.row(i) - centroids.row(0)).squaredNorm();
  }
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2(i);
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_int(n));
    }
    centroids.row(c) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2(i) = std::min(d2(i), (x.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

LloydOutcome lloyd(const Matrix& x, Matrix centroids, const KMeansOptions& opts) {
  const Eigen::Index n = x.rows();
  const int k = static_cast<int>(centroids.rows());
  std::vector<int> assign(n, -1);
  std::vector<double> dist(n, 0.0);
  int reseeds = 0;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = nearest(centroids, x.row(i), &dist[i]);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    Matrix sums = Matrix::Zero(k, x.cols());
    std::vector<int> sizes(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assign[i]) += x.row(i);
      ++sizes[assign[i]];
    }
    bool reseeded = false;
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) {
        centroids.row(c) = sums.row(c) / sizes[c];
      } else if (reseeds < opts.max_reseeds) {
        // Move the empty centroid onto the worst-served point.
        const auto far = std::max_element(dist.begin(), dist.end()) - dist.begin();
        centroids.row(c) = x.row(far);
        dist[far] = 0.0;
        ++reseeds;
        reseeded = true;
      }
    }
    if (!changed && !reseeded) break;
  }
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    assign[i] = nearest(centroids, x.row(i), &dist[i]);
    inertia += dist[i];
  }
  return {std::move(assign), std::move(centroids), inertia};
}

}  // namespace

KMeansResult kmeans(const Matrix& points, int k, Rng& rng,
                    const KMeansOptions& opts) {
  if (k < 1 || k > points.rows()) {
    throw std::invalid_argument("kmeans: k must be in [1, n]");
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    LloydOutcome o = lloyd(points, plus_plus_seeds(points, k, rng), opts);
    if (o.inertia < best.inertia) {
      best.assignment = std::move(o.assignment);
      best.centroids = std::move(o.centroids);
      best.inertia = o.inertia;
    }
  }
  return best;
}

ClusterScores cluster_metrics(const Matrix& embeddings,
                              const std::vector<int>& labels, int num_classes,
                              uint64_t seed, const KMeansOptions& opts) {
  if (num_classes < 2) throw ConfigError("clustering needs at least 2 classes");
  if (static_cast<Eigen::Index>(labels.size()) != embeddings.rows()) {
    throw DataError("cluster_metrics: one label per node is required");
  }
  Rng rng(seed);
  KMeansResult km = kmeans(embeddings, num_classes, rng, opts);
  return score_clustering(labels, km.assignment);
}

Graph perturb_for_robustness(const Graph& g, double edge_drop,
                             double feature_mask, Rng& rng) {
  for (double r : {edge_drop, feature_mask}) {
    if (!(r >= 0.0 && r <= 0.8)) {
      throw ConfigError("robustness ratios must lie in [0, 0.8]");
    }
  }
  Matrix adjacency = g.adjacency();
  std::vector<Edge> edges = g.edges();
  const int drop = static_cast<int>(std::floor(edge_drop * edges.size() + 1e-9));
  for (int e : rng.sample_without_replacement(static_cast<int>(edges.size()), drop)) {
    const auto [i, j] = edges[e];
    adjacency(i, j) = 0.0;
    adjacency(j, i) = 0.0;
  }
  Matrix features = g.features();
  const int d = g.num_features();
  const int mask = static_cast<int>(std::floor(feature_mask * d + 1e-9));
  for (int c : rng.sample_without_replacement(d, mask)) features.col(c).setZero();
  return Graph(std::move(adjacency), std::move(features), g.labels());
}

Aggregate aggregate(std::vector<double> values) {
  Aggregate a;
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / values.size();
  double sq = 0.0;
  for (double v : values) sq += (v - a.mean) * (v - a.mean);
  a.std = std::sqrt(sq / values.size());
  a.per_seed = std::move(values);
  return a;
}

std::string to_string(Task task) {
  return task == Task::kClassification ? "classification" : "clustering";
}

MetricReport evaluate_embeddings(const Matrix& embeddings,
                                 const std::vector<int>& labels, Task task,
                                 const std::vector<uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("evaluation needs at least one seed");
  MetricReport report;
  report.task = task;
  report.seeds = seeds;
  std::vector<double> acc, nmi, ari, f1;
  for (uint64_t seed : seeds) {
    if (task == Task::kClassification) {
      acc.push_back(linear_probe(embeddings, labels, seed));
    } else {
      ClusterScores s =
          cluster_metrics(embeddings, labels, class_count(labels), seed);
      acc.push_back(s.accuracy);
      nmi.push_back(s.nmi);
      ari.push_back(s.ari);
      f1.push_back(s.fscore);
    }
  }
  report.accuracy = aggregate(std::move(acc));
  report.nmi = aggregate(std::move(nmi));
  report.ari = aggregate(std::move(ari));
  report.fscore = aggregate(std::move(f1));
  return report;
}

MetricReport evaluate(const Graph& g, const EncoderWeights& weights, Task task,
                      const std::vector<uint64_t>& seeds, bool self_loops) {
  if (!g.has_labels()) throw DataError("evaluation needs node labels");
  DiffusionMatrix s(g, self_loops);
  Matrix h = embed(g.features(), s, weights);
  return evaluate_embeddings(h, *g.labels(), task, seeds);
}

}  // namespace asgcl
