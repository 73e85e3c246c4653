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

#include <optional>
#include <string>
#include <vector>

#include "hbr/linalg.hpp"

namespace hbr {

/// Symmetric nonnegative adjacency with zero diagonal and its degree vector.
class SimilarityGraph {
 public:
  /// Validates symmetry, nonnegativity and finiteness; zeroes the diagonal.
  explicit SimilarityGraph(MatrixXd adjacency);

  Index size() const { return adjacency_.rows(); }
  const MatrixXd& adjacency() const { return adjacency_; }
  const VectorXd& degrees() const { return degrees_; }

 private:
  MatrixXd adjacency_;
  VectorXd degrees_;
};

enum class LaplacianKind { kUnnormalized, kSymmetricNormalized, kRandomWalk };

/// Accepts "unnormalized"/"L", "sym"/"symmetric", "rw"/"random-walk".
LaplacianKind parse_laplacian_kind(const std::string& name);
std::string to_string(LaplacianKind kind);

/// Per-vertex cluster labels in [0, num_clusters).
struct Partition {
  std::vector<int> labels;
  int num_clusters = 0;
  /// Vertices whose label came from a tie-break on a degenerate (zero) row.
  std::vector<Index> flagged;
  /// Set when an algorithm could not keep all clusters distinct.
  bool degenerate = false;

  Index size() const { return static_cast<Index>(labels.size()); }
  std::vector<Index> cluster_sizes() const;
};

/// a_ij = exp(-alpha |p_i - p_j|^2) for i != j; zero when radius is given and
/// the distance is >= radius. Rows of `points` are the samples.
SimilarityGraph gaussian_similarity(const MatrixXd& points, double alpha,
                                    std::optional<double> radius = std::nullopt);

/// D - A, D^{-1/2}(D - A)D^{-1/2} or D^{-1}(D - A).
/// Throws DegenerateDegreeError for isolated vertices with a normalized kind.
MatrixXd laplacian(const SimilarityGraph& g, LaplacianKind kind);

struct CutCosts {
  double cut = 0.0;
  double ratio_cut = 0.0;
  double normalized_cut = 0.0;
  /// True when some cluster is empty (ratio and normalized cuts are then +inf).
  bool has_empty_cluster = false;
};

CutCosts cut_costs(const SimilarityGraph& g, const Partition& p);

}  // namespace hbr
