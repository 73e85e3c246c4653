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

#include "hbr/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <utility>

#include "hbr/baselines.hpp"
#include "hbr/contrasts.hpp"
#include "hbr/datasets.hpp"
#include "hbr/embedding.hpp"
#include "hbr/hbr.hpp"
#include "hbr/random.hpp"

namespace hbr {

using nlohmann::json;

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["name"] = c.name;
  j["input"] = c.input;
  j["generator"] = c.generator;
  j["adjacency"] = c.adjacency;
  j["labels_path"] = c.labels_path;
  j["label_column"] = c.label_column ? json(*c.label_column) : json(nullptr);
  j["has_header"] = c.has_header;
  j["ignore_columns"] = c.ignore_columns;
  j["normalize"] = c.normalize;
  j["alpha"] = c.alpha;
  j["radius"] = c.radius ? json(*c.radius) : json(nullptr);
  j["laplacian"] = to_string(c.laplacian);
  j["m"] = c.m;
  j["algo"] = c.algo;
  j["contrast"] = c.contrast;
  j["eta"] = c.eta;
  j["tol"] = c.tol;
  j["max_iters"] = c.max_iters;
  j["delta"] = c.delta;
  j["seed"] = c.seed;
  j["kmeans_restarts"] = c.kmeans_restarts;
  j["sbm_perturbation"] = c.sbm_perturbation;
  j["plot_data"] = c.plot_data;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("run config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "name") c.name = v.get<std::string>();
      else if (key == "input") c.input = v.get<std::string>();
      else if (key == "generator") c.generator = v.get<std::string>();
      else if (key == "adjacency") c.adjacency = v.get<std::string>();
      else if (key == "labels_path") c.labels_path = v.get<std::string>();
      else if (key == "label_column") {
        if (!v.is_null()) c.label_column = v.get<std::string>();
      } else if (key == "has_header") c.has_header = v.get<bool>();
      else if (key == "ignore_columns") c.ignore_columns = v.get<std::vector<std::string>>();
      else if (key == "normalize") c.normalize = v.get<bool>();
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "radius") {
        if (!v.is_null()) c.radius = v.get<double>();
      } else if (key == "laplacian") c.laplacian = parse_laplacian_kind(v.get<std::string>());
      else if (key == "m") c.m = v.get<int>();
      else if (key == "algo") c.algo = v.get<std::string>();
      else if (key == "contrast") c.contrast = v.get<std::string>();
      else if (key == "eta") c.eta = v.get<double>();
      else if (key == "tol") c.tol = v.get<double>();
      else if (key == "max_iters") c.max_iters = v.get<int>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "kmeans_restarts") c.kmeans_restarts = v.get<int>();
      else if (key == "sbm_perturbation") c.sbm_perturbation = v.get<double>();
      else if (key == "plot_data") c.plot_data = v.get<std::string>();
      else throw InputError("unknown run config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("run config: ") + e.what());
  }
  return c;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput:
    case ErrorKind::kStructural:
    case ErrorKind::kDegenerateDegree:
      return 2;
    case ErrorKind::kNumerical:
    case ErrorKind::kExhaustion:
      return 3;
    case ErrorKind::kVerification:
      return 4;
  }
  return 3;
}

std::string to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput: return "input";
    case ErrorKind::kStructural: return "structural";
    case ErrorKind::kDegenerateDegree: return "degenerate_degree";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kExhaustion: return "exhaustion";
    case ErrorKind::kVerification: return "verification";
  }
  return "numerical";
}

namespace {

template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

json vector_json(const VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void write_plot_data(const EmpiricalObjective& obj, const std::string& path) {
  if (obj.dim() != 3) throw InputError("plot data needs m = 3");
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.precision(10);
  out << "u1,u2,u3,F\n";
  constexpr int kRings = 60;
  constexpr int kPerRing = 120;
  for (int i = 0; i < kRings; ++i) {
    const double theta = std::numbers::pi * (i + 0.5) / kRings;
    for (int j = 0; j < kPerRing; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / kPerRing;
      VectorXd u(3);
      u << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
      out << u(0) << ',' << u(1) << ',' << u(2) << ',' << obj.value(u) << '\n';
    }
  }
}

}  // namespace

nlohmann::json run_cluster(const RunConfig& cfg) {
  const bool needs_contrast = cfg.algo == "hbropt" || cfg.algo == "hbrenum";
  std::optional<Contrast> contrast;
  stage("config", [&] {
    if (cfg.algo != "hbropt" && cfg.algo != "hbrenum" && cfg.algo != "kmeans" &&
        cfg.algo != "oracle") {
      throw InputError("unknown algorithm '" + cfg.algo +
                       "' (expected hbropt, hbrenum, kmeans or oracle)");
    }
    if (cfg.m < 1) throw InputError("m must be positive");
    const int sources = !cfg.input.empty() + !cfg.generator.empty() + !cfg.adjacency.empty();
    if (sources != 1) {
      throw InputError("exactly one of input, generator or adjacency must be given");
    }
    if (needs_contrast) contrast = parse_contrast(cfg.contrast);
    return 0;
  });

  // Independent streams for data generation and for the algorithm.
  const std::uint64_t data_seed = derive_seed(cfg.seed, 1);
  const std::uint64_t algo_seed = derive_seed(cfg.seed, 2);

  std::optional<SimilarityGraph> graph;
  std::optional<Partition> truth;
  if (!cfg.generator.empty()) {
    if (cfg.generator == "circles") {
      const LabeledDataset ds = stage("generate", [&] { return gen_circles(data_seed); });
      truth = ds.labels;
      graph = stage("similarity",
                    [&] { return gaussian_similarity(ds.points, cfg.alpha, cfg.radius); });
    } else if (cfg.generator == "sbm") {
      LabeledGraph lg = stage("generate", [&] { return gen_sbm(data_seed, cfg.sbm_perturbation); });
      truth = std::move(lg.truth);
      graph = std::move(lg.graph);
    } else {
      throw StageError("generate",
                       InputError("unknown generator '" + cfg.generator + "' (circles or sbm)"));
    }
  } else if (!cfg.adjacency.empty()) {
    graph = stage("load_adjacency",
                  [&] { return SimilarityGraph(load_matrix_csv(cfg.adjacency)); });
    if (!cfg.labels_path.empty()) {
      truth = stage("load_labels", [&] { return load_labels(cfg.labels_path); });
    }
  } else {
    LabeledDataset ds = stage("load_csv", [&] {
      return load_csv(cfg.input, CsvOptions{cfg.label_column, cfg.has_header, cfg.ignore_columns});
    });
    if (cfg.normalize) ds = stage("normalize", [&] { return normalize_unit_std(ds); });
    truth = ds.labels;
    graph = stage("similarity",
                  [&] { return gaussian_similarity(ds.points, cfg.alpha, cfg.radius); });
  }
  if (truth && truth->size() != graph->size()) {
    throw StageError("load_labels", InputError("label count does not match the vertex count"));
  }

  const Embedding emb = stage("embedding", [&] {
    return spectral_embed(*graph, cfg.laplacian, static_cast<Index>(cfg.m));
  });

  std::optional<RecoveredBasis> basis;
  std::optional<EmpiricalObjective> objective;
  const Partition pred = stage("cluster", [&]() -> Partition {
    if (cfg.algo == "hbropt" || cfg.algo == "hbrenum") {
      objective.emplace(*contrast, emb.points);
      if (cfg.algo == "hbropt") {
        HbrOptConfig oc;
        oc.eta = cfg.eta;
        oc.tol = cfg.tol;
        oc.max_iters = cfg.max_iters;
        oc.seed = algo_seed;
        basis = hbr_opt(*objective, cfg.m, oc);
      } else {
        HbrEnumConfig ec;
        if (cfg.delta > 0.0) ec.delta = cfg.delta;
        basis = hbr_enum(*objective, cfg.m, ec);
      }
      return assign_clusters(*basis, emb);
    }
    if (cfg.algo == "kmeans") return spherical_kmeans(emb, cfg.m, algo_seed, cfg.kmeans_restarts);
    if (!truth) throw InputError("oracle centroids need ground-truth labels");
    return oracle_centroids(emb, *truth);
  });

  json out;
  out["schema"] = 1;
  out["status"] = "ok";
  out["config"] = to_json(cfg);
  out["n"] = graph->size();
  out["m"] = cfg.m;
  out["laplacian"] = to_string(emb.kind);
  out["eigenvalues"] = vector_json(emb.eigenvalues);
  out["eigengap"] = emb.eigengap;
  out["labels"] = pred.labels;
  out["flagged"] = pred.flagged;
  out["degenerate"] = pred.degenerate;
  json centers = json::array();
  if (basis) {
    for (const VectorXd& c : basis->centers) centers.push_back(vector_json(c));
    out["objective_values"] = basis->objective_values;
    out["iterations"] = basis->iterations;
    out["converged"] = basis->converged;
    out["max_deflation_residual"] = basis->max_deflation_residual;
  }
  out["centers"] = centers;

  stage("evaluate", [&] {
    if (truth) {
      const AccuracyReport r = matched_accuracy(pred, *truth);
      json confusion = json::array();
      for (Index i = 0; i < r.confusion.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < r.confusion.cols(); ++k) row.push_back(r.confusion(i, k));
        confusion.push_back(row);
      }
      out["accuracy"] = {{"accuracy", r.accuracy}, {"matching", r.matching}, {"confusion", confusion}};
    } else {
      out["accuracy"] = nullptr;
    }
    const CutCosts cc = cut_costs(*graph, pred);
    out["cut_costs"] = {{"cut", cc.cut},
                        {"ratio_cut", cc.ratio_cut},
                        {"normalized_cut", cc.normalized_cut},
                        {"has_empty_cluster", cc.has_empty_cluster}};
    return 0;
  });

  if (!cfg.plot_data.empty()) {
    stage("plot", [&] {
      if (!objective) throw InputError("plot data needs an hbropt or hbrenum run");
      write_plot_data(*objective, cfg.plot_data);
      return 0;
    });
  }
  return out;
}

}  // namespace hbr
