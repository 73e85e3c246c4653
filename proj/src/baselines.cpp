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


#include "hbr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hbr/error.hpp"
#include "hbr/parallel.hpp"
#include "hbr/random.hpp"

namespace hbr {

std::vector<int> hungarian_max(const MatrixXd& weights) {
  if (weights.rows() != weights.cols()) {
    throw StructuralError("hungarian_max: weight matrix must be square");
  }
  const int k = static_cast<int>(weights.rows());
  if (k == 0) return {};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Potentials-based shortest augmenting path on cost = -weight, 1-based.
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<int> p(k + 1, 0), way(k + 1, 0);
  for (int i = 1; i <= k; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(k + 1, kInf);
    std::vector<char> used(k + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = -weights(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(k, 0);
  for (int j = 1; j <= k; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

AccuracyReport matched_accuracy(const Partition& pred, const Partition& truth) {
  if (pred.size() != truth.size()) {
    throw StructuralError("matched_accuracy: partitions have " + std::to_string(pred.size()) +
                          " and " + std::to_string(truth.size()) + " vertices");
  }
  if (pred.size() == 0) throw InputError("matched_accuracy: empty partition");
  int k = std::max(pred.num_clusters, truth.num_clusters);
  for (int l : pred.labels) k = std::max(k, l + 1);
  for (int l : truth.labels) k = std::max(k, l + 1);
  for (std::size_t i = 0; i < pred.labels.size(); ++i) {
    if (pred.labels[i] < 0 || truth.labels[i] < 0) {
      throw InputError("matched_accuracy: negative label at vertex " + std::to_string(i));
    }
  }

  AccuracyReport report;
  report.confusion = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t i = 0; i < pred.labels.size(); ++i) {
    ++report.confusion(pred.labels[i], truth.labels[i]);
  }
  report.matching = hungarian_max(report.confusion.cast<double>());
  long matched = 0;
  for (int p = 0; p < k; ++p) matched += report.confusion(p, report.matching[p]);
  report.accuracy = static_cast<double>(matched) / static_cast<double>(pred.size());
  return report;
}

namespace {

struct KMeansRun {
  std::vector<int> labels;
  double objective = -std::numeric_limits<double>::infinity();
};

int nearest(const MatrixXd& means, const VectorXd& y) {
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (Index l = 0; l < means.cols(); ++l) {
    const double score = means.col(l).dot(y);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(l);
    }
  }
  return best;
}

KMeansRun kmeans_once(const MatrixXd& y, const std::vector<Index>& rows, int m, Rng rng) {
  const auto count = static_cast<Index>(rows.size());
  const Index dim = y.cols();
  MatrixXd means(dim, m);
  // Partial Fisher-Yates over the usable rows; repeats only when there are
  // fewer usable rows than clusters.
  std::vector<Index> pool = rows;
  for (int l = 0; l < m; ++l) {
    if (l < count) {
      const auto pick = l + static_cast<Index>(rng.index(static_cast<std::uint64_t>(count - l)));
      std::swap(pool[static_cast<std::size_t>(l)], pool[static_cast<std::size_t>(pick)]);
      means.col(l) = y.row(pool[static_cast<std::size_t>(l)]).transpose();
    } else {
      means.col(l) = y.row(rows[rng.index(static_cast<std::uint64_t>(count))]).transpose();
    }
  }

  std::vector<int> assign(rows.size(), 0);
  auto assign_all = [&] {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      assign[r] = nearest(means, y.row(rows[r]).transpose());
    }
  };
  for (int iter = 0; iter < 300; ++iter) {
    assign_all();
    MatrixXd sums = MatrixXd::Zero(dim, m);
    std::vector<Index> sizes(static_cast<std::size_t>(m), 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      sums.col(assign[r]) += y.row(rows[r]).transpose();
      ++sizes[static_cast<std::size_t>(assign[r])];
    }
    std::vector<char> taken(rows.size(), 0);
    for (int l = 0; l < m; ++l) {
      if (sizes[static_cast<std::size_t>(l)] > 0) continue;
      std::size_t worst = 0;
      double worst_cos = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (taken[r]) continue;
        const double c = means.col(assign[r]).dot(y.row(rows[r]).transpose());
        if (c < worst_cos) {
          worst_cos = c;
          worst = r;
        }
      }
      taken[worst] = 1;
      sums.col(l) = y.row(rows[worst]).transpose();
    }
    double change = 0.0;
    for (int l = 0; l < m; ++l) {
      const double norm = sums.col(l).norm();
      if (!(norm > 0.0)) continue;
      const VectorXd next = sums.col(l) / norm;
      change = std::max(change, (next - means.col(l)).norm());
      means.col(l) = next;
    }
    if (change < 1e-8) break;
  }
  assign_all();

  KMeansRun run;
  run.labels = assign;
  run.objective = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    run.objective += means.col(assign[r]).dot(y.row(rows[r]).transpose());
  }
  return run;
}

}  // namespace

Partition spherical_kmeans(const MatrixXd& points, int m, std::uint64_t seed, int restarts) {
  if (m < 1) throw InputError("spherical_kmeans: m must be positive");
  if (restarts < 1) throw InputError("spherical_kmeans: restarts must be positive");
  if (points.rows() == 0) throw InputError("spherical_kmeans: no points");

  Partition p;
  p.num_clusters = m;
  p.labels.assign(static_cast<std::size_t>(points.rows()), 0);
  MatrixXd y = points;
  std::vector<Index> rows;
  for (Index i = 0; i < y.rows(); ++i) {
    const double norm = y.row(i).norm();
    if (norm > 0.0) {
      y.row(i) /= norm;
      rows.push_back(i);
    } else {
      p.flagged.push_back(i);
    }
  }
  if (rows.empty()) {
    p.degenerate = true;
    return p;
  }

  std::vector<Index> distinct;
  for (Index i : rows) {
    bool seen = false;
    for (Index d : distinct) {
      if (y.row(i).dot(y.row(d)) > 1.0 - 1e-12) {
        seen = true;
        break;
      }
    }
    if (!seen) distinct.push_back(i);
    if (static_cast<int>(distinct.size()) >= m) break;
  }
  p.degenerate = static_cast<int>(distinct.size()) < m;

  std::vector<KMeansRun> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    runs[r] = kmeans_once(y, rows, m, Rng(derive_seed(seed, r)));
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].objective > runs[best].objective) best = r;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    p.labels[static_cast<std::size_t>(rows[r])] = runs[best].labels[r];
  }
  return p;
}

Partition oracle_centroids(const MatrixXd& points, const Partition& truth) {
  if (truth.size() != points.rows()) {
    throw StructuralError("oracle_centroids: truth covers " + std::to_string(truth.size()) +
                          " vertices, embedding has " + std::to_string(points.rows()));
  }
  int k = truth.num_clusters;
  for (int l : truth.labels) k = std::max(k, l + 1);
  MatrixXd means = MatrixXd::Zero(points.cols(), k);
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    const int l = truth.labels[static_cast<std::size_t>(i)];
    ++sizes[static_cast<std::size_t>(l)];
    const double norm = points.row(i).norm();
    if (norm > 0.0) means.col(l) += points.row(i).transpose() / norm;
  }
  for (int l = 0; l < k; ++l) {
    if (sizes[static_cast<std::size_t>(l)] == 0) {
      throw InputError("oracle_centroids: ground-truth class " + std::to_string(l) +
                       " is empty");
    }
    means.col(l) /= static_cast<double>(sizes[static_cast<std::size_t>(l)]);
    const double norm = means.col(l).norm();
    if (norm > 0.0) means.col(l) /= norm;
  }

  Partition p;
  p.num_clusters = k;
  p.labels.assign(static_cast<std::size_t>(points.rows()), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    const double norm = points.row(i).norm();
    if (!(norm > 0.0)) {
      p.flagged.push_back(i);
      continue;
    }
    p.labels[static_cast<std::size_t>(i)] = nearest(means, points.row(i).transpose() / norm);
  }
  return p;
}

}  // namespace hbr
