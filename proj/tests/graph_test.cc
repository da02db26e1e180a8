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

#include "asgcl/graph.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "asgcl/errors.h"
#include "test_util.h"

namespace asgcl {
namespace {

Matrix triangle() {
  Matrix a = Matrix::Ones(3, 3);
  a.diagonal().setZero();
  return a;
}

Matrix path3() {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = a(1, 2) = a(2, 1) = 1.0;
  return a;
}

TEST(BuildGraphTest, SingleEdge) {
  std::vector<Edge> pairs = {{0, 1}};
  Graph g = build_graph(pairs, Matrix::Zero(2, 1));
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  EXPECT_EQ(g.adjacency(), expected);
  EXPECT_EQ(g.num_edges(), 1);
}

TEST(BuildGraphTest, EdgelessGraph) {
  std::vector<Edge> pairs;
  Graph g = build_graph(pairs, Matrix::Zero(3, 2));
  EXPECT_EQ(g.adjacency(), Matrix::Zero(3, 3));
  EXPECT_EQ(g.num_edges(), 0);
}

TEST(BuildGraphTest, DuplicatesCollapse) {
  std::vector<Edge> once = {{0, 1}};
  std::vector<Edge> twice = {{0, 1}, {1, 0}};
  EXPECT_EQ(build_graph(once, Matrix::Zero(2, 1)).adjacency(),
            build_graph(twice, Matrix::Zero(2, 1)).adjacency());
}

TEST(BuildGraphTest, RejectsOutOfRangeAndSelfLoops) {
  std::vector<Edge> bad = {{0, 3}};
  EXPECT_THROW(build_graph(bad, Matrix::Zero(3, 1)), DataError);
  std::vector<Edge> loop = {{1, 1}};
  EXPECT_THROW(build_graph(loop, Matrix::Zero(3, 1)), DataError);
}

TEST(GraphTest, RejectsAsymmetricAdjacency) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(Graph(a, Matrix::Zero(2, 1)), DataError);
}

TEST(GraphTest, RejectsLabelCountMismatch) {
  EXPECT_THROW(Graph(Matrix::Zero(2, 2), Matrix::Zero(2, 1),
                     std::vector<int>{0}),
               DataError);
}

TEST(LaplacianTest, TriangleEntries) {
  Matrix l = sym_norm_laplacian(triangle());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(l(i, j), i == j ? 1.0 : -0.5, 1e-15);
    }
  }
}

TEST(LaplacianTest, EdgelessIsIdentity) {
  EXPECT_EQ(sym_norm_laplacian(Matrix::Zero(3, 3)), Matrix::Identity(3, 3));
}

TEST(LaplacianTest, IsolatedNodeRowIsIdentity) {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  Matrix l = sym_norm_laplacian(a);
  EXPECT_DOUBLE_EQ(l(2, 2), 1.0);
  EXPECT_DOUBLE_EQ(l(2, 0), 0.0);
  EXPECT_DOUBLE_EQ(l(0, 1), -1.0);
}

TEST(LaplacianTest, MatchesLoopFormulaOnRandomGraphs) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = testing::random_graph(15, 0.3, 2, rng);
    EXPECT_LT((sym_norm_laplacian(g) -
               testing::laplacian_by_loops(g.adjacency()))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-14);
  }
}

TEST(LaplacianTest, SpectrumWithinZeroTwo) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    Vector ev = eigenvalues(
        sym_norm_laplacian(testing::random_graph(20, 0.2, 1, rng)));
    EXPECT_GE(ev.minCoeff(), -1e-10);
    EXPECT_LE(ev.maxCoeff(), 2.0 + 1e-10);
  }
}

TEST(EigenTest, IdentitySpectrum) {
  Vector ev = eigenvalues(Matrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev(i), 1.0, 1e-14);
}

TEST(EigenTest, TriangleSpectrum) {
  Vector ev = eigenvalues(sym_norm_laplacian(triangle()));
  EXPECT_NEAR(ev(0), 0.0, 1e-12);
  EXPECT_NEAR(ev(1), 1.5, 1e-12);
  EXPECT_NEAR(ev(2), 1.5, 1e-12);
  std::vector<double> jacobi =
      testing::jacobi_eigenvalues(sym_norm_laplacian(triangle()));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev(i), jacobi[i], 1e-12);
}

TEST(EigenTest, PathSpectrum) {
  Vector ev = eigenvalues(sym_norm_laplacian(path3()));
  EXPECT_NEAR(ev(0), 0.0, 1e-12);
  EXPECT_NEAR(ev(1), 1.0, 1e-12);
  EXPECT_NEAR(ev(2), 2.0, 1e-12);
}

TEST(EigenTest, AgreesWithJacobiOnRandomSymmetric) {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m = testing::random_symmetric(9, rng);
    Vector ev = eigenvalues(m);
    std::vector<double> ref = testing::jacobi_eigenvalues(m);
    for (int i = 0; i < 9; ++i) EXPECT_NEAR(ev(i), ref[i], 1e-10);
  }
}

TEST(EigenTest, DecompositionReconstructs) {
  Rng rng(8);
  Matrix m = testing::random_symmetric(10, rng);
  EigenDecomposition e = eigendecompose(m);
  Matrix back = e.eigenvectors * e.eigenvalues.asDiagonal() *
                e.eigenvectors.transpose();
  EXPECT_LT((back - m).cwiseAbs().maxCoeff(), 1e-12);
  for (int i = 1; i < 10; ++i) {
    EXPECT_LE(e.eigenvalues(i - 1), e.eigenvalues(i));
  }
}

TEST(EigenTest, RejectsNonSymmetric) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(eigendecompose(m), NumericError);
}

TEST(FrobeniusTest, Identical) {
  EXPECT_EQ(frobenius_distance(triangle(), triangle()), 0.0);
}

TEST(FrobeniusTest, TwoUnitEntries) {
  EXPECT_DOUBLE_EQ(frobenius_distance(Matrix::Identity(2, 2),
                                      Matrix::Zero(2, 2)),
                   std::sqrt(2.0));
}

TEST(FrobeniusTest, TriangleVersusPathByLoops) {
  Matrix a = sym_norm_laplacian(triangle());
  Matrix b = sym_norm_laplacian(path3());
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) sum += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
  }
  EXPECT_NEAR(frobenius_distance(a, b), std::sqrt(sum), 1e-15);
}

TEST(FrobeniusTest, ShapeMismatchThrows) {
  EXPECT_THROW(frobenius_distance(Matrix::Zero(2, 2), Matrix::Zero(3, 3)),
               std::invalid_argument);
}

}  // namespace
}  // namespace asgcl
