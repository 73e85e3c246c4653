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

#include "hbr/embedding.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "hbr/error.hpp"

namespace hbr {
namespace {

Embedding from_eigen(const SymEigResult& eig, Index m, LaplacianKind kind) {
  const Index n = eig.eigenvalues.size();
  Embedding e;
  e.kind = kind;
  e.eigenvalues = eig.eigenvalues.head(m);
  e.eigengap = m < n ? eig.eigenvalues(m) - eig.eigenvalues(m - 1)
                     : std::numeric_limits<double>::infinity();
  e.points = eig.eigenvectors.leftCols(m) * std::sqrt(static_cast<double>(n));
  return e;
}

void check_dim(Index m, Index n) {
  if (m < 1 || m > n) {
    throw InputError("spectral_embed: m = " + std::to_string(m) + " must lie in [1, " +
                     std::to_string(n) + "]");
  }
}

}  // namespace

Embedding spectral_embed(const MatrixXd& laplacian, Index m, LaplacianKind kind) {
  if (kind == LaplacianKind::kRandomWalk) {
    throw InputError("spectral_embed: random-walk Laplacian needs the graph overload");
  }
  check_dim(m, laplacian.rows());
  return from_eigen(sym_eig(laplacian), m, kind);
}

Embedding spectral_embed(const SimilarityGraph& g, LaplacianKind kind, Index m) {
  check_dim(m, g.size());
  if (kind != LaplacianKind::kRandomWalk) {
    return from_eigen(sym_eig(laplacian(g, kind)), m, kind);
  }
  // L_rw v = lambda v  <=>  L_sym y = lambda y with v = D^{-1/2} y.
  const SymEigResult eig = sym_eig(laplacian(g, LaplacianKind::kSymmetricNormalized));
  const Index n = g.size();
  MatrixXd v = g.degrees().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors.leftCols(m);
  Eigen::HouseholderQR<MatrixXd> qr(v);
  MatrixXd q = qr.householderQ() * MatrixXd::Identity(n, m);
  canonicalize_signs(q);

  Embedding e;
  e.kind = kind;
  e.eigenvalues = eig.eigenvalues.head(m);
  e.eigengap = m < n ? eig.eigenvalues(m) - eig.eigenvalues(m - 1)
                     : std::numeric_limits<double>::infinity();
  e.points = q * std::sqrt(static_cast<double>(n));
  return e;
}

double embedding_deviation(const Embedding& x, const Embedding& xt) {
  if (x.size() != xt.size() || x.dim() != xt.dim()) {
    throw StructuralError("embedding_deviation: shape mismatch");
  }
  const MatrixXd r = procrustes_rotation(x.points, xt.points);
  const MatrixXd diff = x.points * r - xt.points;
  Eigen::JacobiSVD<MatrixXd> svd(diff);
  const double top = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  return top / std::sqrt(static_cast<double>(x.size()));
}

double embedding_perturbation_bound(double perturbation_norm, double eigengap) {
  if (!(eigengap > perturbation_norm)) {
    throw NumericalError("perturbation norm " + std::to_string(perturbation_norm) +
                         " is not below the eigengap " + std::to_string(eigengap));
  }
  return 2.0 * perturbation_norm / (eigengap - perturbation_norm);
}

}  // namespace hbr
