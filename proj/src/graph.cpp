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

#include "hbr/graph.hpp"

#include <cmath>
#include <limits>

#include "hbr/error.hpp"

namespace hbr {

SimilarityGraph::SimilarityGraph(MatrixXd adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols()) {
    throw StructuralError("adjacency matrix must be square");
  }
  if (!adjacency_.allFinite()) throw InputError("adjacency has non-finite entries");
  if ((adjacency_.array() < 0.0).any()) throw InputError("adjacency has negative entries");
  if (asymmetry(adjacency_) > 1e-12) throw StructuralError("adjacency is not symmetric");
  // Exact symmetry from the upper triangle keeps every derived Laplacian exactly symmetric.
  const MatrixXd upper = adjacency_.triangularView<Eigen::StrictlyUpper>();
  adjacency_ = upper + upper.transpose();
  degrees_ = adjacency_.rowwise().sum();
}

LaplacianKind parse_laplacian_kind(const std::string& name) {
  if (name == "unnormalized" || name == "L" || name == "un") return LaplacianKind::kUnnormalized;
  if (name == "sym" || name == "symmetric") return LaplacianKind::kSymmetricNormalized;
  if (name == "rw" || name == "random-walk") return LaplacianKind::kRandomWalk;
  throw InputError("unknown Laplacian kind '" + name + "' (expected unnormalized|sym|rw)");
}

std::string to_string(LaplacianKind kind) {
  switch (kind) {
    case LaplacianKind::kUnnormalized: return "unnormalized";
    case LaplacianKind::kSymmetricNormalized: return "sym";
    case LaplacianKind::kRandomWalk: return "rw";
  }
  return "unknown";
}

std::vector<Index> Partition::cluster_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(num_clusters), 0);
  for (int label : labels) ++sizes[static_cast<std::size_t>(label)];
  return sizes;
}

SimilarityGraph gaussian_similarity(const MatrixXd& points, double alpha,
                                    std::optional<double> radius) {
  const Index n = points.rows();
  if (n < 2) throw InputError("gaussian_similarity: need at least two points");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InputError("gaussian_similarity: alpha must be positive");
  }
  if (radius && !(*radius > 0.0)) throw InputError("gaussian_similarity: radius must be positive");
  if (!points.allFinite()) throw InputError("gaussian_similarity: non-finite coordinates");

  MatrixXd a = MatrixXd::Zero(n, n);
  const double r2 = radius ? (*radius) * (*radius) : std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d2 = (points.row(i) - points.row(j)).squaredNorm();
      const double w = d2 >= r2 ? 0.0 : std::exp(-alpha * d2);
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  return SimilarityGraph(std::move(a));
}

MatrixXd laplacian(const SimilarityGraph& g, LaplacianKind kind) {
  const MatrixXd& a = g.adjacency();
  const VectorXd& d = g.degrees();
  const Index n = g.size();
  if (kind != LaplacianKind::kUnnormalized) {
    for (Index i = 0; i < n; ++i) {
      if (!(d(i) > 0.0)) throw DegenerateDegreeError(i);
    }
  }
  MatrixXd l = -a;
  l.diagonal() = d;
  switch (kind) {
    case LaplacianKind::kUnnormalized:
      return l;
    case LaplacianKind::kSymmetricNormalized:
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) l(i, j) /= std::sqrt(d(i) * d(j));
      }
      return l;
    case LaplacianKind::kRandomWalk:
      for (Index i = 0; i < n; ++i) l.row(i) /= d(i);
      return l;
  }
  return l;
}

CutCosts cut_costs(const SimilarityGraph& g, const Partition& p) {
  if (p.size() != g.size()) throw StructuralError("cut_costs: partition size mismatch");
  const auto k = static_cast<std::size_t>(p.num_clusters);
  std::vector<double> boundary(k, 0.0), volume(k, 0.0);
  std::vector<Index> count(k, 0);
  const MatrixXd& a = g.adjacency();
  for (Index i = 0; i < g.size(); ++i) {
    const auto li = static_cast<std::size_t>(p.labels[static_cast<std::size_t>(i)]);
    if (li >= k) throw InputError("cut_costs: label out of range");
    ++count[li];
    volume[li] += g.degrees()(i);
    for (Index j = 0; j < g.size(); ++j) {
      if (p.labels[static_cast<std::size_t>(j)] != static_cast<int>(li)) boundary[li] += a(i, j);
    }
  }
  CutCosts costs;
  for (std::size_t c = 0; c < k; ++c) {
    costs.cut += boundary[c];
    if (count[c] == 0) {
      costs.has_empty_cluster = true;
      continue;
    }
    costs.ratio_cut += boundary[c] / static_cast<double>(count[c]);
    costs.normalized_cut += volume[c] > 0.0 ? boundary[c] / volume[c] : 0.0;
  }
  if (costs.has_empty_cluster) {
    costs.ratio_cut = std::numeric_limits<double>::infinity();
    costs.normalized_cut = std::numeric_limits<double>::infinity();
  }
  return costs;
}

}  // namespace hbr
