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
#include <optional>
#include <string>
#include <vector>

#include "hbr/graph.hpp"
#include "hbr/linalg.hpp"

namespace hbr {

struct LabeledDataset {
  MatrixXd points;
  std::optional<Partition> labels;
  std::vector<std::string> feature_names;
  /// Original label strings; labels->labels indexes into this list.
  std::vector<std::string> label_names;

  Index size() const { return points.rows(); }
};

struct CsvOptions {
  std::optional<std::string> label_column;
  bool has_header = true;
  /// Columns to skip (for example an identifier column).
  std::vector<std::string> ignore_columns;
};

/// Comma-separated file with numeric features. Without a header columns are
/// named c0, c1, ... Labels map to indices in sorted order (numeric order when
/// every label parses as a number). Throws InputError naming the row and
/// column of malformed data.
LabeledDataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Divides each feature by its sample standard deviation. Zero-variance
/// features are dropped with a warning on std::clog; throws InputError when
/// nothing is left or n < 2.
LabeledDataset normalize_unit_std(const LabeledDataset& ds);

/// Three noisy rings: radii 1, 3, 5 with 200, 350, 700 points, uniform angles,
/// radius r (1 + e) with e ~ U(-0.1, 0.1). Labels 0, 1, 2 by ring.
LabeledDataset gen_circles(std::uint64_t seed);

struct LabeledGraph {
  SimilarityGraph graph;
  Partition truth;
};

/// Block-diagonal graph: two 10x10 blocks with entries 0.1, a 1000x1000 block
/// with about 5% of its symmetric pairs set to 0.001, plus a dense symmetric
/// perturbation with entries U(0, perturbation).
LabeledGraph gen_sbm(std::uint64_t seed, double perturbation = 1e-3);

/// Disconnected union of dense blocks with U(lo, hi) weights.
LabeledGraph gen_blocks(const std::vector<Index>& sizes, std::uint64_t seed, double lo = 0.5,
                        double hi = 1.0);

/// Random block sizes (each >= min_size) summing to n.
std::vector<Index> random_block_sizes(Index n, Index m, std::uint64_t seed, Index min_size = 3);

/// Features followed by a `label` column (label names when present).
void write_dataset_csv(const LabeledDataset& ds, const std::string& path);

/// Dense adjacency, one row per line, no header.
void write_adjacency_csv(const SimilarityGraph& g, const std::string& path);
MatrixXd load_matrix_csv(const std::string& path);

/// One label per line (optional header `label`).
Partition load_labels(const std::string& path, std::vector<std::string>* names = nullptr);

}  // namespace hbr
