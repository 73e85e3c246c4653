// Copyright 2026 The HBR Authors.
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

#pragma once

#include "hbr/graph.hpp"
#include "hbr/linalg.hpp"

namespace hbr {

/// Rows of `points` are the embedded vertices x_i. Columns are mutually
/// orthogonal with norm sqrt(n).
struct Embedding {
  MatrixXd points;
  LaplacianKind kind = LaplacianKind::kUnnormalized;
  /// The m smallest Laplacian eigenvalues, ascending.
  VectorXd eigenvalues;
  /// lambda_{m+1} - lambda_m; +inf when m == n.
  double eigengap = 0.0;

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
};

/// Bottom-m eigenvectors of a symmetric Laplacian (L or L_sym), scaled to sqrt(n).
/// `kind` is recorded only; kRandomWalk is rejected because its matrix is not
/// symmetric (use the graph overload).
Embedding spectral_embed(const MatrixXd& laplacian, Index m,
                         LaplacianKind kind = LaplacianKind::kUnnormalized);

/// Embeds a graph with the given Laplacian. For the random-walk Laplacian the
/// bottom eigenvectors are D^{-1/2} times those of L_sym, re-orthonormalised
/// (Householder QR) so the columns stay Euclidean-orthogonal.
Embedding spectral_embed(const SimilarityGraph& g, LaplacianKind kind, Index m);

/// (1/sqrt(n)) ||X R - Xt||_2 with R the Procrustes rotation aligning X to Xt.
double embedding_deviation(const Embedding& x, const Embedding& xt);

/// 2 ||H|| / (delta - ||H||); throws NumericalError unless delta > ||H||.
double embedding_perturbation_bound(double perturbation_norm, double eigengap);

}  // namespace hbr
