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

#include "asgcl/spectral_augment.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "asgcl/errors.h"
#include "asgcl/format.h"

namespace asgcl {

Matrix flip_direction(const Graph& g) {
  const int n = g.num_nodes();
  Matrix c = Matrix::Ones(n, n) - 2.0 * g.adjacency();
  c.diagonal().setZero();
  return c;
}

namespace {

long budget_entries(int n, double budget) {
  // The epsilon guards products like 0.29 * 100 = 28.999999999999996.
  return static_cast<long>(
      std::floor(budget * static_cast<double>(n) * n + 1e-9));
}

void check_budget(double budget) {
  if (!(budget > 0.0 && budget <= 1.0)) {
    std::ostringstream msg;
    msg << "perturbation budget must be in (0, 1], got " << budget;
    throw ConfigError(msg.str());
  }
}

}  // namespace

FlipProbability::FlipProbability(Matrix delta, double budget)
    : delta_(std::move(delta)), budget_(budget) {
  check_budget(budget_);
  const Eigen::Index n = delta_.rows();
  if (delta_.cols() != n) {
    throw std::invalid_argument("flip probabilities must be square");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (delta_(i, i) != 0.0) {
      throw std::invalid_argument("flip probabilities need a zero diagonal");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = delta_(i, j);
      if (!(v >= 0.0 && v <= 1.0) || v != delta_(j, i)) {
        throw std::invalid_argument(
            "flip probabilities must be symmetric and in [0, 1]");
      }
    }
  }
  if (nonzeros() > max_nonzeros()) {
    throw std::invalid_argument("flip probabilities exceed the L0 budget");
  }
}

FlipProbability FlipProbability::zeros(int n, double budget) {
  return FlipProbability(Matrix::Zero(n, n), budget);
}

long FlipProbability::nonzeros() const {
  return static_cast<long>((delta_.array() != 0.0).count());
}

long FlipProbability::max_nonzeros() const {
  return budget_entries(num_nodes(), budget_);
}

double FlipProbability::expected_flips() const { return delta_.sum() / 2.0; }

FlipProbability project_delta(const Matrix& raw, double budget) {
  check_budget(budget);
  const int n = static_cast<int>(raw.rows());
  if (raw.cols() != n) throw std::invalid_argument("project_delta: not square");
  Matrix sym = 0.5 * (raw + raw.transpose());
  sym.diagonal().setZero();
  sym = sym.cwiseMax(0.0).cwiseMin(1.0);

  struct Pair {
    double value;
    int i, j;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (sym(i, j) > 0.0) pairs.push_back({sym(i, j), i, j});
    }
  }
  const size_t keep = static_cast<size_t>(budget_entries(n, budget) / 2);
  Matrix out = Matrix::Zero(n, n);
  if (pairs.size() > keep) {
    // Pairs are generated in (i,j) order, so a stable sort breaks ties
    // lexicographically.
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& a, const Pair& b) { return a.value > b.value; });
    pairs.resize(keep);
  }
  for (const Pair& p : pairs) {
    out(p.i, p.j) = p.value;
    out(p.j, p.i) = p.value;
  }
  return FlipProbability(std::move(out), budget);
}

FlipProbability uniform_delta(int n, double budget) {
  check_budget(budget);
  Matrix init = Matrix::Constant(n, n, budget);
  return project_delta(init, budget);
}

double spectral_loss_weighted(const Matrix& weighted_adjacency,
                              const Vector& reference_spectrum) {
  Vector spectrum = eigenvalues(sym_norm_laplacian(weighted_adjacency));
  return (spectrum - reference_spectrum).squaredNorm();
}

double spectral_loss(const Graph& g, const Matrix& delta) {
  Vector reference = eigenvalues(sym_norm_laplacian(g));
  Matrix weighted = g.adjacency() + flip_direction(g).cwiseProduct(delta);
  return spectral_loss_weighted(weighted, reference);
}

SpectralGradient spectral_loss_grad_weighted(const Matrix& weighted_adjacency,
                                             const Vector& reference_spectrum) {
  const Matrix& w = weighted_adjacency;
  const Eigen::Index n = w.rows();
  EigenDecomposition dec = eigendecompose(sym_norm_laplacian(w));

  double min_gap = INFINITY;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    min_gap = std::min(min_gap, dec.eigenvalues(k + 1) - dec.eigenvalues(k));
  }
  if (min_gap < kDegenerateGap) {
    std::ostringstream msg;
    msg << "degenerate spectrum: smallest eigenvalue gap " << min_gap;
    throw DegenerateSpectrumError(msg.str(), min_gap);
  }

  SpectralGradient out;
  Vector residual = dec.eigenvalues - reference_spectrum;
  out.loss = residual.squaredNorm();

  // dLoss/dL~ = sum_k 2 r_k u_k u_k^T. L~ = I - N with N = S W S, so
  // dLoss/dN is its negation.
  const Matrix& u = dec.eigenvectors;
  Matrix grad_n = -(u * (2.0 * residual).asDiagonal() * u.transpose());

  Vector s = degrees(w).unaryExpr(
      [](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; });

  // Degree path: d_p = sum_j W_pj, s_p = d_p^{-1/2}, ds/dd = -s^3 / 2.
  // dLoss/ds_p = 2 sum_j gradN_pj W_pj s_j (both N and W symmetric).
  Vector degree_term(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += grad_n(p, j) * w(p, j) * s(j);
    degree_term(p) = -s(p) * s(p) * s(p) * acc;
  }

  // Moving the pair (ij, ji) shifts N_ij, N_ji directly and d_i, d_j by one.
  out.grad = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double g = 2.0 * grad_n(i, j) * s(i) * s(j) + degree_term(i) +
                 degree_term(j);
      out.grad(i, j) = g;
      out.grad(j, i) = g;
    }
  }
  return out;
}

SpectralGradient spectral_loss_grad(const Graph& g, const Matrix& delta) {
  Vector reference = eigenvalues(sym_norm_laplacian(g));
  Matrix c = flip_direction(g);
  Matrix weighted = g.adjacency() + c.cwiseProduct(delta);
  SpectralGradient out = spectral_loss_grad_weighted(weighted, reference);
  out.grad = out.grad.cwiseProduct(c);
  return out;
}

Matrix symmetry_noise(const Matrix& a, double noise, Rng& rng) {
  const Eigen::Index n = a.rows();
  Matrix e(n, a.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) e(i, j) = rng.uniform();
  }
  return a + noise * 0.5 * (e + e.transpose());
}

AugmentResult optimize_delta(const Graph& g, const AugmentOptions& opts,
                             Rng& rng) {
  check_budget(opts.budget);
  if (opts.rounds < 1) throw ConfigError("augmentation rounds must be >= 1");
  if (!(opts.step >= 0.0)) throw ConfigError("augmentation step must be >= 0");

  const Vector reference = eigenvalues(sym_norm_laplacian(g));
  const Matrix c = flip_direction(g);
  auto loss_of = [&](const FlipProbability& d) {
    return spectral_loss_weighted(g.adjacency() + c.cwiseProduct(d.matrix()),
                                  reference);
  };

  AugmentResult result;
  result.delta = uniform_delta(g.num_nodes(), opts.budget);
  double loss = loss_of(result.delta);
  result.trajectory.push_back({0, loss, result.delta.nonzeros(), 0.0, false});

  for (int round = 1; round <= opts.rounds; ++round) {
    Matrix weighted = g.adjacency() + c.cwiseProduct(result.delta.matrix());
    bool noised = false;
    SpectralGradient sg;
    for (int attempt = 0;; ++attempt) {
      try {
        sg = spectral_loss_grad_weighted(
            noised ? symmetry_noise(weighted, opts.noise * std::pow(10.0, attempt - 1), rng)
                   : weighted,
            reference);
        break;
      } catch (const DegenerateSpectrumError& e) {
        if (attempt >= 3) {
          throw NumericError(std::string("spectral gradient: ") + e.what() +
                             " persists after symmetric noise");
        }
        noised = true;
      }
    }
    const Matrix grad = sg.grad.cwiseProduct(c);

    double step = opts.step;
    bool accepted = false;
    for (int halving = 0; halving <= opts.max_halvings; ++halving) {
      FlipProbability candidate =
          project_delta(result.delta.matrix() - step * grad, opts.budget);
      const double candidate_loss = loss_of(candidate);
      if (candidate_loss <= loss) {
        result.delta = std::move(candidate);
        loss = candidate_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    result.trajectory.push_back({round, loss, result.delta.nonzeros(),
                                 accepted ? step : 0.0, noised});
  }
  return result;
}

Graph sample_augmented(const Graph& g, const FlipProbability& delta, Rng& rng) {
  const int n = g.num_nodes();
  if (delta.num_nodes() != n) {
    throw std::invalid_argument("sample_augmented: size mismatch");
  }
  Matrix a = g.adjacency();
  const Matrix& p = delta.matrix();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p(i, j))) {
        const double flipped = 1.0 - a(i, j);
        a(i, j) = flipped;
        a(j, i) = flipped;
      }
    }
  }
  return g.with_adjacency(std::move(a));
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<AugmentRound>& trajectory) {
  out << "round,loss,nnz\n";
  for (const AugmentRound& r : trajectory) {
    out << r.round << ',' << format_real(r.loss) << ',' << r.nonzeros << '\n';
  }
}

}  // namespace asgcl
