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

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hbr/embedding.hpp"
#include "hbr/graph.hpp"
#include "hbr/linalg.hpp"

namespace hbr {

/// Maximum-weight perfect matching on a square weight matrix (Hungarian
/// algorithm, O(k^3)). Returns row -> column.
std::vector<int> hungarian_max(const MatrixXd& weights);

struct AccuracyReport {
  double accuracy = 0.0;
  /// Predicted cluster -> true label. Padded clusters may map to labels that
  /// never occur.
  std::vector<int> matching;
  /// confusion(p, t) = number of vertices with predicted p and true label t.
  Eigen::MatrixXi confusion;
};

/// Best bijection between predicted and true labels; the smaller side is padded.
AccuracyReport matched_accuracy(const Partition& pred, const Partition& truth);

/// Spherical k-means on the unit-normalized rows. Each restart seeds the means
/// at m distinct random rows and runs Lloyd iterations (tol 1e-8 on the means,
/// at most 300); the restart with the largest total cosine wins. Empty clusters
/// are reseeded at the worst-fitting point. Zero rows go to cluster 0 and are
/// flagged; `degenerate` is set when there are fewer than m distinct directions.
Partition spherical_kmeans(const MatrixXd& points, int m, std::uint64_t seed, int restarts = 1);

inline Partition spherical_kmeans(const Embedding& x, int m, std::uint64_t seed,
                                  int restarts = 1) {
  return spherical_kmeans(x.points, m, seed, restarts);
}

/// Means of the normalized rows per true class; each row goes to the closest
/// mean in cosine distance. Throws InputError for an empty class.
Partition oracle_centroids(const MatrixXd& points, const Partition& truth);

inline Partition oracle_centroids(const Embedding& x, const Partition& truth) {
  return oracle_centroids(x.points, truth);
}

}  // namespace hbr
