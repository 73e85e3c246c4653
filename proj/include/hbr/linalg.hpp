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

#include <span>

#include <Eigen/Core>

namespace hbr {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Full symmetric eigendecomposition. Eigenvalues ascend; column i of
/// `eigenvectors` pairs with eigenvalues(i).
struct SymEigResult {
  VectorXd eigenvalues;
  MatrixXd eigenvectors;
};

/// Largest absolute entry of A - A^T relative to max(1, |A|_max).
double asymmetry(const MatrixXd& a);

/// Eigendecomposition of a symmetric matrix (relative symmetry tolerance 1e-12).
///
/// Deterministic for a fixed input: ascending eigenvalues, ties keep solver
/// order, and each eigenvector is signed so that its largest-magnitude entry
/// (first such index) is nonnegative.
///
/// Throws StructuralError for non-square or asymmetric input.
SymEigResult sym_eig(const MatrixXd& m);

/// Flips the sign of each column so its largest-magnitude entry is nonnegative.
void canonicalize_signs(MatrixXd& columns);

/// Orthogonal R = U V^T from the SVD of A^T B; minimizes ||A R - B||_F.
MatrixXd procrustes_rotation(const MatrixXd& a, const MatrixXd& b);

/// u minus its projection onto span(basis). Basis vectors must be unit-norm
/// and mutually orthogonal; the projection is applied twice for stability.
VectorXd project_orthogonal(const VectorXd& u, std::span<const VectorXd> basis);

/// Orthonormal basis (columns) of the orthogonal complement of the column
/// span of a; singular values below rel_tol * largest count as zero.
MatrixXd orthogonal_complement(const MatrixXd& a, double rel_tol = 1e-8);

/// Spectral norm via power iteration on M^T M (deterministic start vector).
double operator_norm(const MatrixXd& m, int max_iters = 200, double tol = 1e-10);

/// Angle in [0, pi] between nonzero vectors.
double angle_between(const VectorXd& a, const VectorXd& b);

/// Angle in [0, pi/2] between the lines spanned by a and b.
double line_angle(const VectorXd& a, const VectorXd& b);

}  // namespace hbr
