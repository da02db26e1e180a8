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

#ifndef ASGCL_SPECTRAL_AUGMENT_H_
#define ASGCL_SPECTRAL_AUGMENT_H_

#include <iosfwd>
#include <vector>

#include "asgcl/graph.h"
#include "asgcl/rng.h"

namespace asgcl {

// C = (11^T - A) - A with a zero diagonal: +1 where an edge may be added,
// -1 where one may be removed.
Matrix flip_direction(const Graph& g);

// Symmetric flip-probability matrix in [0,1] with zero diagonal whose
// nonzero count (mirrored pairs counted twice) fits floor(budget * n^2).
class FlipProbability {
 public:
  FlipProbability() = default;
  // Checks the invariants; throws std::invalid_argument on violation.
  FlipProbability(Matrix delta, double budget);

  static FlipProbability zeros(int n, double budget);

  const Matrix& matrix() const { return delta_; }
  double budget() const { return budget_; }
  int num_nodes() const { return static_cast<int>(delta_.rows()); }
  long nonzeros() const;
  long max_nonzeros() const;
  // Sum over unordered pairs: the expected number of flips per sample.
  double expected_flips() const;

  friend bool operator==(const FlipProbability&,
                         const FlipProbability&) = default;

 private:
  Matrix delta_;
  double budget_ = 1.0;
};

// Symmetrize, zero the diagonal, clamp to [0,1], then keep the
// floor(budget * n^2) largest entries (pairs kept or dropped together, ties to
// the lower (i,j) index). Throws ConfigError if budget is outside (0,1].
FlipProbability project_delta(const Matrix& raw, double budget);

// Relaxed spectral variation ||eig(Lap(A + C o delta)) - eig(Lap(A))||^2 on
// ascending spectra.
double spectral_loss(const Graph& g, const Matrix& delta);
inline double spectral_loss(const Graph& g, const FlipProbability& delta) {
  return spectral_loss(g, delta.matrix());
}

// Same objective on an explicit weighted adjacency, against a fixed reference
// spectrum.
double spectral_loss_weighted(const Matrix& weighted_adjacency,
                              const Vector& reference_spectrum);

struct SpectralGradient {
  double loss = 0.0;
  // d loss / d delta_ij where the symmetric pair (ij, ji) moves together.
  Matrix grad;
};

// Analytic gradient of spectral_loss. Eigenvalue derivatives dl_k/dL =
// u_k u_k^T are chained through the degree normalization and the flip
// direction. Throws DegenerateSpectrumError when two augmented eigenvalues
// are within 1e-8.
SpectralGradient spectral_loss_grad(const Graph& g, const Matrix& delta);

// Gradient with respect to a weighted adjacency W (pair convention as above),
// optionally on a noise-separated copy used only for the eigensolve.
SpectralGradient spectral_loss_grad_weighted(const Matrix& weighted_adjacency,
                                             const Vector& reference_spectrum);

inline constexpr double kDegenerateGap = 1e-8;
inline constexpr double kDefaultNoise = 1e-6;

// a + noise * (E + E^T) / 2 with E_ij ~ U(0,1); diagonal included.
Matrix symmetry_noise(const Matrix& a, double noise, Rng& rng);

struct AugmentOptions {
  double budget = 0.2;  // epsilon
  int rounds = 5;       // T
  double step = 0.5;    // eta
  double noise = kDefaultNoise;
  int max_halvings = 5;
};

struct AugmentRound {
  int round = 0;  // 0 is the projected initialization
  double loss = 0.0;
  long nonzeros = 0;
  double step = 0.0;  // step actually taken (0 when every halving failed)
  bool noise_applied = false;
};

struct AugmentResult {
  FlipProbability delta;
  std::vector<AugmentRound> trajectory;
};

// Projected gradient descent on the relaxed spectral variation, starting
// from the uniform constant budget matrix. A round whose projected loss
// would increase is retried with halved steps; if all halvings fail the
// iterate is kept. The trajectory is therefore nonincreasing.
AugmentResult optimize_delta(const Graph& g, const AugmentOptions& opts,
                             Rng& rng);

// The uniform baseline: constant `budget` off the diagonal, projected.
FlipProbability uniform_delta(int n, double budget);

// One Bernoulli draw per unordered pair, mirrored. A~ = A + C o M.
Graph sample_augmented(const Graph& g, const FlipProbability& delta, Rng& rng);

// CSV "round,loss,nnz" with a header row.
void write_trajectory_csv(std::ostream& out,
                          const std::vector<AugmentRound>& trajectory);

}  // namespace asgcl

#endif  // ASGCL_SPECTRAL_AUGMENT_H_
