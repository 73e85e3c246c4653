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

#include <json.hpp>

#include "hbr/error.hpp"
#include "hbr/graph.hpp"

namespace hbr {

/// One clustering run. Exactly one input source is used: `generator`
/// (circles | sbm), `adjacency` (dense CSV, labels from `labels_path`) or
/// `input` (feature CSV).
struct RunConfig {
  std::string name;
  std::string input;
  std::string generator;
  std::string adjacency;
  std::string labels_path;
  std::optional<std::string> label_column;
  bool has_header = true;
  std::vector<std::string> ignore_columns;
  /// Divide CSV features by their standard deviation.
  bool normalize = true;
  double alpha = 1.0;
  std::optional<double> radius;
  LaplacianKind laplacian = LaplacianKind::kUnnormalized;
  int m = 3;
  /// hbropt | hbrenum | kmeans | oracle
  std::string algo = "hbropt";
  std::string contrast = "sig";
  double eta = 0.1;
  double tol = 1e-8;
  int max_iters = 1000;
  double delta = 0.0;
  std::uint64_t seed = 0;
  int kmeans_restarts = 1;
  /// SBM perturbation magnitude.
  double sbm_perturbation = 1e-3;
  std::string plot_data;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are an InputError.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Error raised by a pipeline stage; `stage` names where it happened.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Loads or generates the data, embeds, clusters and evaluates. The result
/// carries the resolved config, labels, centers, objective values, accuracy
/// (when ground truth exists) and cut costs; it holds no timing so equal
/// configs give identical output.
nlohmann::json run_cluster(const RunConfig& cfg);

/// 0 ok, 2 input, 3 numerical, 4 verification.
int exit_code(ErrorKind kind);
std::string to_string(ErrorKind kind);

}  // namespace hbr
