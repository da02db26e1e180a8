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

#ifndef ASGCL_TESTS_TEST_UTIL_H_
#define ASGCL_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "asgcl/graph.h"
#include "asgcl/rng.h"

namespace asgcl::testing {

// Erdos-Renyi G(n, p) with standard-normal-ish features (uniform [-1,1]).
inline Graph random_graph(int n, double p, int d, Rng& rng) {
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) a(i, j) = a(j, i) = 1.0;
    }
  }
  Matrix x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
  }
  return Graph(std::move(a), std::move(x));
}

inline Matrix random_matrix(int rows, int cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-scale, scale);
  }
  return m;
}

inline Matrix random_symmetric(int n, Rng& rng) {
  Matrix m = random_matrix(n, n, rng);
  return 0.5 * (m + m.transpose());
}

// Cyclic Jacobi rotations; an eigensolver independent of the library's.
// Returns ascending eigenvalues.
inline std::vector<double> jacobi_eigenvalues(Matrix a, int sweeps = 100) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a(i, i);
  std::sort(out.begin(), out.end());
  return out;
}

// Normalized Laplacian written out entry by entry.
inline Matrix laplacian_by_loops(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i] += w(i, j);
  Matrix l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double si = d[i] > 0 ? 1.0 / std::sqrt(d[i]) : 0.0;
      const double sj = d[j] > 0 ? 1.0 / std::sqrt(d[j]) : 0.0;
      l(i, j) = (i == j ? 1.0 : 0.0) - si * w(i, j) * sj;
    }
  }
  return l;
}

// |a - b| / max(|a|, |b|).
inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Central difference of f along one coordinate of m.
inline double central_difference(const std::function<double(const Matrix&)>& f,
                                 Matrix m, int r, int c, double h) {
  const double orig = m(r, c);
  m(r, c) = orig + h;
  const double up = f(m);
  m(r, c) = orig - h;
  const double down = f(m);
  return (up - down) / (2.0 * h);
}

}  // namespace asgcl::testing

#endif  // ASGCL_TESTS_TEST_UTIL_H_
