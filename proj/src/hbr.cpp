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


#include "hbr/hbr.hpp"

namespace hbr {

Partition assign_clusters(const RecoveredBasis& basis, const MatrixXd& points) {
  const auto m = static_cast<Index>(basis.centers.size());
  if (m == 0) throw InputError("assign_clusters: no centers");
  for (const VectorXd& c : basis.centers) {
    if (c.size() != points.cols()) {
      throw StructuralError("assign_clusters: center dimension " + std::to_string(c.size()) +
                            " does not match embedding width " +
                            std::to_string(points.cols()));
    }
  }
  Partition p;
  p.num_clusters = static_cast<int>(m);
  p.labels.assign(static_cast<std::size_t>(points.rows()), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    if (points.row(i).squaredNorm() == 0.0) {
      p.flagged.push_back(i);
      continue;
    }
    int best = 0;
    double best_score = -1.0;
    for (Index l = 0; l < m; ++l) {
      const double score = std::abs(points.row(i).dot(basis.centers[static_cast<std::size_t>(l)]));
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(l);
      }
    }
    p.labels[static_cast<std::size_t>(i)] = best;
  }
  return p;
}

}  // namespace hbr
