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

// hbr: spectral clustering by hidden basis recovery.
//
//   hbr cluster --gen circles --alpha 0.25 --laplacian rw --m 3 --algo hbropt --contrast sig
//   hbr bench --manifest tools/manifests/uci.json --runs 25
//   hbr verify-theory --check all
//   hbr gen --gen sbm --seed 1 --output sbm.csv --labels-output sbm_labels.csv

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbr/baselines.hpp"
#include "hbr/contrasts.hpp"
#include "hbr/datasets.hpp"
#include "hbr/embedding.hpp"
#include "hbr/error.hpp"
#include "hbr/parallel.hpp"
#include "hbr/pipeline.hpp"
#include "hbr/random.hpp"
#include "hbr/theory.hpp"

namespace {

using nlohmann::json;
using namespace hbr;

void emit(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

int report_error(const std::string& stage, ErrorKind kind, const std::string& message,
                 const std::string& output) {
  json j{{"schema", 1},
         {"status", "error"},
         {"stage", stage},
         {"kind", to_string(kind)},
         {"message", message}};
  std::cerr << "error (" << stage << "): " << message << "\n";
  try {
    emit(j, output);
  } catch (const Error&) {
    emit(j, "");
  }
  return exit_code(kind);
}

// ---------------------------------------------------------------- cluster

int cmd_cluster(const RunConfig& cfg, const std::string& output, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  try {
    emit(run_cluster(cfg), output);
  } catch (const StageError& e) {
    return report_error(e.stage(), e.kind(), e.what(), output);
  } catch (const Error& e) {
    return report_error("output", e.kind(), e.what(), "");
  }
  if (timing) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    std::cerr << "wall time: " << dt.count() << " s\n";
  }
  return 0;
}

// ---------------------------------------------------------------- bench

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

struct BenchRow {
  RunConfig cfg;
  std::vector<double> accuracies;
  int failures = 0;
  std::string error;
};

int cmd_bench(const std::string& manifest, int runs, const std::string& output) {
  std::vector<BenchRow> rows;
  try {
    std::ifstream in(manifest);
    if (!in) throw InputError("cannot open manifest '" + manifest + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw InputError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw InputError("manifest must be a JSON array of run configs");
    for (const json& item : j) rows.push_back({run_config_from_json(item), {}, 0, {}});
    if (runs < 1) throw InputError("--runs must be positive");
  } catch (const Error& e) {
    return report_error("manifest", e.kind(), e.what(), "");
  }

  parallel_for(rows.size(), [&](std::size_t i) {
    BenchRow& row = rows[i];
    for (int r = 0; r < runs; ++r) {
      RunConfig cfg = row.cfg;
      cfg.seed = row.cfg.seed + static_cast<std::uint64_t>(r);
      cfg.plot_data.clear();
      try {
        const json result = run_cluster(cfg);
        if (result["accuracy"].is_null()) throw InputError("run has no ground-truth labels");
        row.accuracies.push_back(result["accuracy"]["accuracy"].get<double>());
      } catch (const std::exception& e) {
        if (row.failures++ == 0) row.error = e.what();
      }
    }
  });

  std::ostringstream csv;
  csv.precision(6);
  csv << "index,name,algo,contrast,laplacian,alpha,m,runs,mean_accuracy,sd_accuracy,failures,error\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const BenchRow& row = rows[i];
    csv << i << ',' << csv_field(row.cfg.name) << ',' << row.cfg.algo << ','
        << (row.cfg.algo == "hbropt" || row.cfg.algo == "hbrenum" ? row.cfg.contrast : "") << ','
        << to_string(row.cfg.laplacian) << ',' << row.cfg.alpha << ',' << row.cfg.m << ','
        << runs << ',';
    if (!row.accuracies.empty()) {
      double mean = 0.0;
      for (double a : row.accuracies) mean += a;
      mean /= static_cast<double>(row.accuracies.size());
      double var = 0.0;
      for (double a : row.accuracies) var += (a - mean) * (a - mean);
      const double sd = row.accuracies.size() > 1
                            ? std::sqrt(var / static_cast<double>(row.accuracies.size() - 1))
                            : 0.0;
      csv << mean << ',' << sd;
    } else {
      csv << ',';
    }
    csv << ',' << row.failures << ',' << csv_field(row.error) << '\n';
  }
  if (output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream out(output);
    if (!out) return report_error("output", ErrorKind::kInput, "cannot write '" + output + "'", "");
    out << csv.str();
  }
  return 0;
}

// ---------------------------------------------------------------- verify-theory

struct TheoryOptions {
  int m = 3;
  std::string contrast = "abs";
  std::uint64_t seed = 1;
  int trials = 50;
  double noise_scale = 0.5;
  int starts = 0;
};

json check_enumeration(const TheoryOptions& o) {
  const Contrast c = parse_contrast(o.contrast);
  Rng rng(o.seed);
  const WeightedBasisObjective f = WeightedBasisObjective::random(o.m, c, rng);
  EnumerationConfig ec;
  ec.seed = o.seed;
  ec.starts = o.starts;
  const MaximaCertificate cert = enumerate_maxima(f, ec);
  double worst = 0.0;
  for (double e : cert.angular_errors) worst = std::max(worst, e);
  // Without P2 some +-Z_i may legitimately fail to be maxima; the found set
  // must then still avoid spurious points and agree with the grid oracle.
  bool pass = c.p2 ? cert.complete() && cert.signed_classes == 2 * o.m
                   : cert.spurious.empty() && cert.signed_classes > 0;
  json j{{"check", "enumeration"},
         {"contrast", c.name},
         {"p1", c.p1},
         {"p2", c.p2},
         {"m", o.m},
         {"signed_classes", cert.signed_classes},
         {"lines", cert.lines},
         {"starts", cert.starts},
         {"not_converged", cert.not_converged},
         {"rejected", cert.rejected},
         {"spurious", cert.spurious.size()},
         {"max_angular_error", worst}};
  if (o.m == 2 || o.m == 3) {
    const GridOracleResult grid = dense_grid_maxima(f);
    j["grid"] = {{"points", grid.grid_points},
                 {"discrete_maxima", grid.discrete_maxima},
                 {"rejected", grid.rejected},
                 {"polished_maxima", grid.maxima.size()},
                 {"all_on_basis", grid.all_on_basis},
                 {"all_basis_hit", grid.all_basis_hit}};
    const bool agree = grid.all_on_basis &&
                       static_cast<int>(grid.maxima.size()) == cert.signed_classes;
    j["grid"]["agrees_with_multistart"] = agree;
    pass = pass && agree && (!c.p2 || grid.all_basis_hit);
  }
  j["pass"] = pass;
  return j;
}

json check_necessity_g2(const TheoryOptions& o) {
  const Contrast g2 = power_contrast(2.0);
  const std::vector<Index> sizes = random_block_sizes(60, o.m, o.seed);
  const LabeledGraph lg = gen_blocks(sizes, o.seed);
  const Embedding emb = spectral_embed(lg.graph, LaplacianKind::kUnnormalized, o.m);
  const EmpiricalObjective emp(g2, emb.points);

  Rng rng(o.seed);
  double spread = 0.0;
  for (int k = 0; k < 1000; ++k) spread = std::max(spread, std::abs(emp.value(rng.unit_vector(o.m)) - 1.0));

  EnumerationConfig ec;
  ec.seed = o.seed;
  const MaximaCertificate cert = enumerate_maxima(emp, MatrixXd::Identity(o.m, o.m), ec);
  const bool pass = cert.flat_landscape && cert.found_maxima.empty() && spread < 1e-10;
  return {{"check", "necessity-g2"},
          {"m", o.m},
          {"max_abs_deviation_from_1", spread},
          {"flat_landscape", cert.flat_landscape},
          {"certified_maxima", cert.found_maxima.size()},
          {"pass", pass}};
}

json check_necessity_convexity() {
  const ConvexityCounterexample bad = necessity_counterexample_convexity(power_contrast(0.5));
  const ConvexityCounterexample good = necessity_counterexample_convexity(builtin_contrast("p", 3.0));
  const bool pass = bad.violation_found && bad.certificate.local_max && !good.violation_found &&
                    !good.plateau;
  return {{"check", "necessity-convexity"},
          {"violating_contrast", {{"contrast", "t^0.5"},
                                  {"t", bad.t},
                                  {"alpha", {bad.alpha(0), bad.alpha(1)}},
                                  {"beta", {bad.beta(0), bad.beta(1)}},
                                  {"probe_margin", bad.certificate.probe_margin},
                                  {"chart_hessian_max", bad.certificate.chart_hessian_max},
                                  {"verdict", bad.verdict}}},
          {"admissible_contrast", {{"contrast", "p:3"}, {"verdict", good.verdict}}},
          {"pass", pass}};
}

json check_necessity_p2() {
  json cases = json::array();
  bool pass = true;
  for (const auto& [label, coeffs] :
       std::vector<std::pair<std::string, std::vector<double>>>{{"t^4+t^2", {0, 0, 1, 0, 1}},
                                                                {"t^4-t^2", {0, 0, -1, 0, 1}}}) {
    const P2Counterexample r = necessity_counterexample_p2(polynomial_contrast(coeffs));
    pass = pass && r.certified;
    cases.push_back({{"contrast", label},
                     {"h_prime_0", r.slope.value},
                     {"alpha", {r.alpha(0), r.alpha(1)}},
                     {"beta", {r.beta(0), r.beta(1)}},
                     {"constant", r.constant},
                     {"radius", r.radius},
                     {"improvement", r.improvement},
                     {"verdict", r.verdict}});
  }
  bool refused = false;
  try {
    necessity_counterexample_p2(builtin_contrast("abs"));
  } catch (const InputError&) {
    refused = true;
  }
  pass = pass && refused;
  return {{"check", "necessity-p2"}, {"cases", cases}, {"abs_refused", refused}, {"pass", pass}};
}

json check_chart(const TheoryOptions& o) {
  const char* smooth[] = {"p", "gau", "ht"};
  double worst_grad = 0.0, worst_hess = 0.0;
  constexpr int kPairs = 100;
  for (int k = 0; k < kPairs; ++k) {
    Rng rng(derive_seed(o.seed, static_cast<std::uint64_t>(k)));
    const Contrast c = builtin_contrast(smooth[k % 3]);
    const Index m = 2 + static_cast<Index>(rng.index(4));
    const VectorXd v = rng.unit_vector(m);
    const SphereChart chart(v);
    auto compare = [&](const auto& f) {
      const ChartDerivatives exact = chart_derivatives(chart, f);
      const ChartDerivatives fd = chart_derivatives_fd(chart, f);
      worst_grad = std::max(worst_grad, (exact.gradient - fd.gradient).norm() /
                                            std::max(1e-8, fd.gradient.norm()));
      worst_hess = std::max(worst_hess, (exact.hessian - fd.hessian).norm() /
                                            std::max(1e-8, fd.hessian.norm()));
    };
    if (k % 2 == 0) {
      compare(WeightedBasisObjective::random(m, c, rng));
    } else {
      MatrixXd x(40, m);
      for (Index i = 0; i < x.rows(); ++i) x.row(i) = rng.gaussian_vector(m).transpose();
      compare(EmpiricalObjective(c, x));
    }
  }
  return {{"check", "chart"},
          {"pairs", kPairs},
          {"max_rel_error_gradient", worst_grad},
          {"max_rel_error_hessian", worst_hess},
          {"pass", worst_grad < 1e-5 && worst_hess < 1e-5}};
}

json check_perturbation(const TheoryOptions& o) {
  const LabeledGraph lg = gen_blocks({20, 30, 40}, o.seed);
  PerturbationConfig pc;
  pc.trials = o.trials;
  pc.noise_scale = o.noise_scale;
  pc.seed = o.seed;
  pc.starts = o.starts;
  const PerturbationReport r = perturbation_experiment(lg.graph, 3, builtin_contrast("sig"), pc);
  int skipped = 0, checked = 0;
  for (const PerturbationTrial& t : r.trials) {
    skipped += t.skipped;
    checked += t.maxima_checked;
  }
  return {{"check", "perturbation"},
          {"trials", o.trials},
          {"noise_scale", o.noise_scale},
          {"skipped", skipped},
          {"max_deviation_over_bound", r.max_bound_ratio},
          {"bound_holds", r.bound_holds},
          {"maxima_checked_trials", checked},
          {"spurious_maxima", r.total_spurious},
          {"rejected_far_endpoints", r.total_rejected_far},
          {"max_radius_over_cuberoot_noise", r.max_radius_ratio},
          {"pass", r.bound_holds && r.total_spurious == 0 && r.total_rejected_far == 0}};
}

int cmd_verify(const std::string& check, const TheoryOptions& o, const std::string& output) {
  const std::vector<std::string> known = {"enumeration", "necessity-g2", "necessity-convexity",
                                          "necessity-p2", "chart", "perturbation"};
  std::vector<std::string> todo;
  if (check == "all") {
    todo = known;
  } else if (std::find(known.begin(), known.end(), check) != known.end()) {
    todo = {check};
  } else {
    return report_error("verify-theory", ErrorKind::kInput, "unknown check '" + check + "'", output);
  }
  json checks = json::array();
  bool pass = true;
  for (const std::string& name : todo) {
    json j;
    try {
      if (name == "enumeration") j = check_enumeration(o);
      else if (name == "necessity-g2") j = check_necessity_g2(o);
      else if (name == "necessity-convexity") j = check_necessity_convexity();
      else if (name == "necessity-p2") j = check_necessity_p2();
      else if (name == "chart") j = check_chart(o);
      else j = check_perturbation(o);
    } catch (const Error& e) {
      return report_error(name, e.kind(), e.what(), output);
    }
    pass = pass && j["pass"].get<bool>();
    checks.push_back(j);
  }
  try {
    emit({{"schema", 1}, {"status", pass ? "ok" : "failed"}, {"checks", checks}}, output);
  } catch (const Error& e) {
    return report_error("output", e.kind(), e.what(), "");
  }
  return pass ? 0 : exit_code(ErrorKind::kVerification);
}

// ---------------------------------------------------------------- gen

int cmd_gen(const std::string& gen, std::uint64_t seed, const std::string& output,
            const std::string& labels_output, double perturbation) {
  try {
    if (output.empty()) throw InputError("--output is required");
    if (gen == "circles") {
      write_dataset_csv(gen_circles(seed), output);
    } else if (gen == "sbm") {
      const LabeledGraph lg = gen_sbm(seed, perturbation);
      write_adjacency_csv(lg.graph, output);
      if (!labels_output.empty()) {
        std::ofstream out(labels_output);
        if (!out) throw InputError("cannot write '" + labels_output + "'");
        out << "label\n";
        for (int l : lg.truth.labels) out << l << '\n';
      }
    } else {
      throw InputError("unknown generator '" + gen + "' (circles or sbm)");
    }
  } catch (const Error& e) {
    return report_error("gen", e.kind(), e.what(), "");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral clustering by hidden basis recovery"};
  app.require_subcommand(1);

  // cluster
  RunConfig cfg;
  std::string laplacian = "unnormalized";
  std::string label_column;
  bool no_header = false, no_normalize = false, timing = false;
  std::string cluster_output;
  double radius = 0.0;
  auto* cluster = app.add_subcommand("cluster", "Cluster one data set and print a JSON result");
  cluster->add_option("--input", cfg.input, "Feature CSV");
  cluster->add_option("--gen", cfg.generator, "Synthetic data: circles or sbm");
  cluster->add_option("--adjacency", cfg.adjacency, "Dense adjacency CSV");
  cluster->add_option("--labels", cfg.labels_path, "Ground-truth labels for --adjacency");
  cluster->add_option("--label-column", label_column, "Label column of --input");
  cluster->add_option("--ignore-column", cfg.ignore_columns, "Columns of --input to skip");
  cluster->add_flag("--no-header", no_header, "--input has no header row");
  cluster->add_flag("--no-normalize", no_normalize, "Keep raw feature scales");
  cluster->add_option("--alpha", cfg.alpha, "Gaussian kernel exp(-alpha d^2)");
  auto* radius_opt = cluster->add_option("--radius", radius, "Kernel cutoff radius");
  cluster->add_option("--laplacian", laplacian, "unnormalized, sym or rw");
  cluster->add_option("--m", cfg.m, "Number of clusters");
  cluster->add_option("--algo", cfg.algo, "hbropt, hbrenum, kmeans or oracle");
  cluster->add_option("--contrast", cfg.contrast, "abs, p:<value>, ht, sig or gau");
  cluster->add_option("--eta", cfg.eta, "HBRopt step size");
  cluster->add_option("--tol", cfg.tol, "HBRopt displacement tolerance");
  cluster->add_option("--max-iters", cfg.max_iters, "HBRopt iteration cap per center");
  cluster->add_option("--delta", cfg.delta, "HBRenum separation angle in radians");
  cluster->add_option("--seed", cfg.seed, "Random seed");
  cluster->add_option("--restarts", cfg.kmeans_restarts, "Spherical k-means restarts");
  cluster->add_option("--sbm-perturbation", cfg.sbm_perturbation, "SBM noise magnitude");
  cluster->add_option("--output", cluster_output, "Write JSON here instead of stdout");
  cluster->add_option("--plot-data", cfg.plot_data, "Write (u1,u2,u3,F) samples to this CSV");
  cluster->add_flag("--timing", timing, "Print wall time to stderr");

  // bench
  std::string manifest, bench_output;
  int runs = 25;
  auto* bench = app.add_subcommand("bench", "Mean accuracy over seeds for each manifest row");
  bench->add_option("--manifest", manifest, "JSON array of run configs")->required();
  bench->add_option("--runs", runs, "Seeds per row");
  bench->add_option("--output", bench_output, "Write CSV here instead of stdout");

  // verify-theory
  std::string check = "all", verify_output;
  TheoryOptions topt;
  auto* verify = app.add_subcommand("verify-theory", "Numerical certificates for the theory");
  verify->add_option("--check", check,
                     "enumeration, necessity-g2, necessity-convexity, necessity-p2, chart, "
                     "perturbation or all");
  verify->add_option("--m", topt.m, "Dimension for enumeration and necessity-g2");
  verify->add_option("--contrast", topt.contrast, "Contrast for enumeration");
  verify->add_option("--seed", topt.seed, "Random seed");
  verify->add_option("--trials", topt.trials, "Perturbation trials");
  verify->add_option("--noise-scale", topt.noise_scale, "Largest ||H|| as a fraction of the eigengap");
  verify->add_option("--starts", topt.starts, "Multistart count (default 50 m)");
  verify->add_option("--output", verify_output, "Write JSON here instead of stdout");

  // gen
  std::string gen_kind, gen_output, gen_labels;
  std::uint64_t gen_seed = 0;
  double gen_perturbation = 1e-3;
  auto* gen = app.add_subcommand("gen", "Write a synthetic data set to CSV");
  gen->add_option("--gen", gen_kind, "circles or sbm")->required();
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--output", gen_output, "Data CSV (adjacency for sbm)");
  gen->add_option("--labels-output", gen_labels, "Label CSV for sbm");
  gen->add_option("--sbm-perturbation", gen_perturbation, "SBM noise magnitude");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*cluster) {
    if (!label_column.empty()) cfg.label_column = label_column;
    cfg.has_header = !no_header;
    cfg.normalize = !no_normalize;
    if (radius_opt->count() > 0) cfg.radius = radius;
    try {
      cfg.laplacian = parse_laplacian_kind(laplacian);
    } catch (const Error& e) {
      return report_error("config", e.kind(), e.what(), cluster_output);
    }
    return cmd_cluster(cfg, cluster_output, timing);
  }
  if (*bench) return cmd_bench(manifest, runs, bench_output);
  if (*verify) return cmd_verify(check, topt, verify_output);
  return cmd_gen(gen_kind, gen_seed, gen_output, gen_labels, gen_perturbation);
}
