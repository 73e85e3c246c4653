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

#include "hbr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hbr/error.hpp"

namespace hbr {

double asymmetry(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

void canonicalize_signs(MatrixXd& columns) {
  for (Index j = 0; j < columns.cols(); ++j) {
    Index arg = 0;
    double best = -1.0;
    for (Index i = 0; i < columns.rows(); ++i) {
      const double mag = std::abs(columns(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (columns.rows() > 0 && columns(arg, j) < 0.0) columns.col(j) *= -1.0;
  }
}

SymEigResult sym_eig(const MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw StructuralError("sym_eig: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + ", expected square");
  }
  if (!m.allFinite()) throw StructuralError("sym_eig: non-finite entries");
  if (asymmetry(m) > 1e-12) throw StructuralError("sym_eig: matrix is not symmetric");
  if (m.rows() == 0) return {};

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sym_eig: eigensolver did not converge");
  }
  SymEigResult result{solver.eigenvalues(), solver.eigenvectors()};
  // Eigen already sorts ascending; a stable pass pins the tie order to column index.
  const Index n = m.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return result.eigenvalues(a) < result.eigenvalues(b);
  });
  SymEigResult sorted{VectorXd(n), MatrixXd(n, n)};
  for (Index k = 0; k < n; ++k) {
    sorted.eigenvalues(k) = result.eigenvalues(order[static_cast<std::size_t>(k)]);
    sorted.eigenvectors.col(k) = result.eigenvectors.col(order[static_cast<std::size_t>(k)]);
  }
  canonicalize_signs(sorted.eigenvectors);
  return sorted;
}

MatrixXd procrustes_rotation(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw StructuralError("procrustes_rotation: shape mismatch");
  }
  Eigen::JacobiSVD<MatrixXd> svd(a.transpose() * b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

VectorXd project_orthogonal(const VectorXd& u, std::span<const VectorXd> basis) {
  VectorXd out = u;
  for (int pass = 0; pass < 2; ++pass) {
    for (const VectorXd& b : basis) out -= b.dot(out) * b;
  }
  return out;
}

MatrixXd orthogonal_complement(const MatrixXd& a, double rel_tol) {
  const Index rows = a.rows();
  if (a.cols() == 0) return MatrixXd::Identity(rows, rows);
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullU);
  const VectorXd& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) rank += sv(i) > rel_tol * sv(0);
  return svd.matrixU().rightCols(rows - rank);
}

double operator_norm(const MatrixXd& m, int max_iters, double tol) {
  if (m.size() == 0) return 0.0;
  // Deterministic, generic start: avoids being orthogonal to structured vectors.
  VectorXd v(m.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = 1.0 + 0.5 * std::sin(1.0 + 3.0 * static_cast<double>(i));
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    VectorXd w = m.transpose() * (m * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    v = w / norm;
    if (std::abs(next - sigma) <= tol * std::max(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return (m * v).norm() > sigma ? (m * v).norm() : sigma;
}

double angle_between(const VectorXd& a, const VectorXd& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double line_angle(const VectorXd& a, const VectorXd& b) {
  const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, 0.0, 1.0));
}

}  // namespace hbr
