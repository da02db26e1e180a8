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

#include "asgcl/losses.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "asgcl/errors.h"
#include "asgcl/log.h"

namespace asgcl {

namespace {

constexpr double kTinyNorm = 1e-12;

// Rows of h at the anchors, scaled to unit length (zero rows stay zero).
struct NormalizedRows {
  Matrix unit;
  Vector norm;
};

NormalizedRows normalized_rows(const Matrix& h, std::span<const int> anchors) {
  NormalizedRows out{Matrix(anchors.size(), h.cols()), Vector(anchors.size())};
  for (size_t a = 0; a < anchors.size(); ++a) {
    const double r = h.row(anchors[a]).norm();
    out.norm(a) = r;
    if (r < kTinyNorm) {
      out.unit.row(a).setZero();
    } else {
      out.unit.row(a) = h.row(anchors[a]) / r;
    }
  }
  return out;
}

// Back through u = x / |x|: dx = (g - (g.u) u) / |x|.
void accumulate_through_norm(const NormalizedRows& rows, const Matrix& d_unit,
                             std::span<const int> anchors, Matrix& d_h) {
  for (size_t a = 0; a < anchors.size(); ++a) {
    const double r = rows.norm(a);
    if (r < kTinyNorm) continue;
    const auto u = rows.unit.row(a);
    const auto g = d_unit.row(a);
    d_h.row(anchors[a]) += (g - g.dot(u) * u) / r;
  }
}

void check_anchors(const Matrix& h1, const Matrix& h2,
                   std::span<const int> anchors) {
  if (anchors.empty()) throw std::invalid_argument("empty anchor set");
  if (h1.rows() != h2.rows() || h1.cols() != h2.cols()) {
    throw std::invalid_argument("view embeddings differ in shape");
  }
  for (int a : anchors) {
    if (a < 0 || a >= h1.rows()) {
      throw std::invalid_argument("anchor index out of range");
    }
  }
}

// One direction of the objective: anchors u, positives/cross negatives v,
// intra negatives u. Accumulates d(loss)/d(sim) scaled by `weight`.
double directional_infonce(const Matrix& cross, const Matrix& intra,
                           double weight, Matrix* d_cross, Matrix* d_intra) {
  const Eigen::Index b = cross.rows();
  double total = 0.0;
  Vector logits(2 * b - 1);
  for (Eigen::Index a = 0; a < b; ++a) {
    logits(0) = cross(a, a);
    Eigen::Index k = 1;
    for (Eigen::Index o = 0; o < b; ++o) {
      if (o == a) continue;
      logits(k++) = cross(a, o);
      logits(k++) = intra(a, o);
    }
    const double peak = logits.maxCoeff();
    Vector e = (logits.array() - peak).exp();
    const double z = e.sum();
    total += -logits(0) + peak + std::log(z);
    if (d_cross) {
      Vector p = e / z;
      (*d_cross)(a, a) += weight * (p(0) - 1.0);
      k = 1;
      for (Eigen::Index o = 0; o < b; ++o) {
        if (o == a) continue;
        (*d_cross)(a, o) += weight * p(k++);
        (*d_intra)(a, o) += weight * p(k++);
      }
    }
  }
  return total;
}

double infonce_impl(const Matrix& h1, const Matrix& h2,
                    std::span<const int> anchors, double temperature,
                    Matrix* d_h1, Matrix* d_h2) {
  check_anchors(h1, h2, anchors);
  if (!(temperature > 0.0)) throw ConfigError("temperature must be > 0");
  const double b = static_cast<double>(anchors.size());
  NormalizedRows n1 = normalized_rows(h1, anchors);
  NormalizedRows n2 = normalized_rows(h2, anchors);
  const double inv_t = 1.0 / temperature;
  Matrix s12 = inv_t * (n1.unit * n2.unit.transpose());
  Matrix s11 = inv_t * (n1.unit * n1.unit.transpose());
  Matrix s22 = inv_t * (n2.unit * n2.unit.transpose());
  Matrix s21 = s12.transpose();

  const double weight = 1.0 / (2.0 * b);
  const bool grads = d_h1 != nullptr;
  const Eigen::Index bs = static_cast<Eigen::Index>(anchors.size());
  Matrix g12, g11, g21, g22;
  if (grads) {
    g12 = g11 = g21 = g22 = Matrix::Zero(bs, bs);
  }
  double loss = directional_infonce(s12, s11, weight, grads ? &g12 : nullptr,
                                    grads ? &g11 : nullptr);
  loss += directional_infonce(s21, s22, weight, grads ? &g21 : nullptr,
                              grads ? &g22 : nullptr);
  loss *= weight;

  if (grads) {
    g12 += g21.transpose();
    Matrix du1 = inv_t * (g12 * n2.unit + (g11 + g11.transpose()) * n1.unit);
    Matrix du2 =
        inv_t * (g12.transpose() * n1.unit + (g22 + g22.transpose()) * n2.unit);
    accumulate_through_norm(n1, du1, anchors, *d_h1);
    accumulate_through_norm(n2, du2, anchors, *d_h2);
  }
  return loss;
}

struct Distance {
  double value;
  Vector direction;  // d value / d x for value = |x - y|; zero at 0
};

Distance distance(const Eigen::Ref<const Vector>& x,
                  const Eigen::Ref<const Vector>& y) {
  Vector diff = x - y;
  const double d = diff.norm();
  if (d == 0.0) return {0.0, Vector::Zero(diff.size())};
  return {d, diff / d};
}

void check_negatives(std::span<const int> anchors,
                     std::span<const int> negatives, Eigen::Index rows) {
  if (negatives.size() != anchors.size()) {
    throw std::invalid_argument("one negative per anchor is required");
  }
  for (int b : negatives) {
    if (b < 0 || b >= rows) throw std::invalid_argument("negative out of range");
  }
}

// sign = +1: lower hinge (d_pos - d_neg + margin), sign = -1: upper hinge
// (d_neg - d_pos - margin).
double triplet_hinge(const Matrix& h1, const Matrix& h2,
                     std::span<const int> anchors,
                     std::span<const int> negatives, double margin,
                     double sign, Matrix* d_h1, Matrix* d_h2) {
  check_negatives(anchors, negatives, h2.rows());
  double total = 0.0;
  for (size_t i = 0; i < anchors.size(); ++i) {
    const int a = anchors[i];
    const int neg = negatives[i];
    Vector x = h1.row(a).transpose();
    Distance pos = distance(x, h2.row(a).transpose());
    Distance far = distance(x, h2.row(neg).transpose());
    const double term = sign * (pos.value - far.value) + margin;
    if (term <= 0.0) continue;
    total += term;
    if (d_h1) {
      d_h1->row(a) += sign * (pos.direction - far.direction).transpose();
      d_h2->row(a) -= sign * pos.direction.transpose();
      d_h2->row(neg) += sign * far.direction.transpose();
    }
  }
  return total;
}

}  // namespace

void LossConfig::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(temperature > 0.0)) throw ConfigError("temperature must be > 0");
  if (batch < 1) throw ConfigError("batch must be >= 1");
}

double cosine_sim(const Eigen::Ref<const Vector>& u,
                  const Eigen::Ref<const Vector>& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu < kTinyNorm || nv < kTinyNorm) return 0.0;
  const double c = u.dot(v) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

double infonce(const Matrix& h1, const Matrix& h2, std::span<const int> anchors,
               double temperature) {
  return infonce_impl(h1, h2, anchors, temperature, nullptr, nullptr);
}

double infonce_with_grad(const Matrix& h1, const Matrix& h2,
                         std::span<const int> anchors, double temperature,
                         Matrix& d_h1, Matrix& d_h2) {
  return infonce_impl(h1, h2, anchors, temperature, &d_h1, &d_h2);
}

std::vector<int> sample_negatives(std::span<const int> anchors, Rng& rng) {
  const size_t b = anchors.size();
  if (b < 2) {
    throw std::invalid_argument("sample_negatives needs at least two anchors");
  }
  std::vector<int> out(b);
  for (size_t p = 0; p < b; ++p) {
    size_t j = static_cast<size_t>(rng.uniform_int(b - 1));
    if (j >= p) ++j;
    out[p] = anchors[j];
  }
  return out;
}

double lower_loss(const Matrix& h1, const Matrix& h2,
                  std::span<const int> anchors, std::span<const int> negatives,
                  double alpha) {
  return triplet_hinge(h1, h2, anchors, negatives, alpha, 1.0, nullptr,
                       nullptr);
}

double upper_loss(const Matrix& h1, const Matrix& h2,
                  std::span<const int> anchors, std::span<const int> negatives,
                  double beta) {
  return triplet_hinge(h1, h2, anchors, negatives, -beta, -1.0, nullptr,
                       nullptr);
}

LossResult total_loss(const Matrix& h1, const Matrix& h2,
                      std::span<const int> anchors,
                      std::span<const int> negatives, const LossConfig& cfg) {
  cfg.validate();
  LossResult out;
  out.d_h1 = Matrix::Zero(h1.rows(), h1.cols());
  out.d_h2 = Matrix::Zero(h2.rows(), h2.cols());
  out.breakdown.infonce = infonce_with_grad(h1, h2, anchors, cfg.temperature,
                                            out.d_h1, out.d_h2);
  if (!negatives.empty()) {
    out.negatives.assign(negatives.begin(), negatives.end());
    if (cfg.use_lower) {
      out.breakdown.lower = triplet_hinge(h1, h2, anchors, negatives, cfg.alpha,
                                          1.0, &out.d_h1, &out.d_h2);
    }
    if (cfg.use_upper) {
      out.breakdown.upper = triplet_hinge(h1, h2, anchors, negatives, -cfg.beta,
                                          -1.0, &out.d_h1, &out.d_h2);
    }
  }
  out.breakdown.total =
      out.breakdown.infonce + out.breakdown.lower + out.breakdown.upper;
  return out;
}

LossResult total_loss(const Matrix& h1, const Matrix& h2,
                      std::span<const int> anchors, const LossConfig& cfg,
                      Rng& rng) {
  if (anchors.size() < 2) {
    if (cfg.use_lower || cfg.use_upper) {
      log_info("batch of one anchor: triplet bound losses skipped");
    }
    return total_loss(h1, h2, anchors, std::span<const int>{}, cfg);
  }
  std::vector<int> negatives = sample_negatives(anchors, rng);
  return total_loss(h1, h2, anchors, negatives, cfg);
}

}  // namespace asgcl
