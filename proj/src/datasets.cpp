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


#include "hbr/datasets.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "hbr/error.hpp"
#include "hbr/random.hpp"

namespace hbr {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out = s.substr(first, last - first + 1);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split(line));
  }
  if (rows.empty()) throw InputError("'" + path + "' is empty");
  return rows;
}

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i];
  }
  return out;
}

// Sorted distinct label strings -> index (numeric order when all are numbers).
std::vector<std::string> sorted_label_names(const std::vector<std::string>& raw) {
  std::vector<std::string> names = raw;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  const bool numeric = std::all_of(names.begin(), names.end(),
                                   [](const std::string& s) { return parse_number(s).has_value(); });
  if (numeric) {
    std::stable_sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
      return *parse_number(a) < *parse_number(b);
    });
  }
  return names;
}

Partition labels_from_strings(const std::vector<std::string>& raw,
                              std::vector<std::string>* names_out) {
  const std::vector<std::string> names = sorted_label_names(raw);
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
  Partition p;
  p.num_clusters = static_cast<int>(names.size());
  p.labels.reserve(raw.size());
  for (const std::string& s : raw) p.labels.push_back(index.at(s));
  if (names_out != nullptr) *names_out = names;
  return p;
}

}  // namespace

LabeledDataset load_csv(const std::string& path, const CsvOptions& options) {
  const auto rows = read_rows(path);
  const std::size_t width = rows.front().size();
  std::vector<std::string> header;
  std::size_t first = 0;
  if (options.has_header) {
    header = rows.front();
    first = 1;
  } else {
    for (std::size_t j = 0; j < width; ++j) header.push_back("c" + std::to_string(j));
  }
  if (rows.size() == first) throw InputError("'" + path + "' has a header but no data rows");

  auto find_column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw InputError("column '" + name + "' not found in '" + path +
                       "'; available columns: " + join(header));
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  std::optional<std::size_t> label_col;
  if (options.label_column) label_col = find_column(*options.label_column);
  std::vector<char> skip(width, 0);
  for (const std::string& name : options.ignore_columns) skip[find_column(name)] = 1;
  if (label_col) skip[*label_col] = 1;

  LabeledDataset ds;
  std::vector<std::size_t> features;
  for (std::size_t j = 0; j < width; ++j) {
    if (!skip[j]) {
      features.push_back(j);
      ds.feature_names.push_back(header[j]);
    }
  }
  if (features.empty()) throw InputError("'" + path + "' has no feature columns");

  const auto n = static_cast<Index>(rows.size() - first);
  ds.points.resize(n, static_cast<Index>(features.size()));
  std::vector<std::string> raw_labels;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::size_t line = r + 1;
    if (row.size() != width) {
      throw InputError("'" + path + "' line " + std::to_string(line) + " has " +
                       std::to_string(row.size()) + " fields, expected " + std::to_string(width));
    }
    for (std::size_t f = 0; f < features.size(); ++f) {
      const auto v = parse_number(row[features[f]]);
      if (!v) {
        throw InputError("'" + path + "' line " + std::to_string(line) + ", column '" +
                         header[features[f]] + "': cannot parse '" + row[features[f]] +
                         "' as a number");
      }
      ds.points(static_cast<Index>(r - first), static_cast<Index>(f)) = *v;
    }
    if (label_col) raw_labels.push_back(row[*label_col]);
  }
  if (label_col) ds.labels = labels_from_strings(raw_labels, &ds.label_names);
  return ds;
}

LabeledDataset normalize_unit_std(const LabeledDataset& ds) {
  const Index n = ds.points.rows();
  if (n < 2) throw InputError("normalize_unit_std needs at least 2 rows");
  std::vector<Index> kept;
  std::vector<double> sds;
  for (Index j = 0; j < ds.points.cols(); ++j) {
    const auto col = ds.points.col(j);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().sum() / static_cast<double>(n - 1);
    const double sd = std::sqrt(var);
    const double scale = std::max(1.0, col.cwiseAbs().maxCoeff());
    if (!(sd > 1e-12 * scale)) {
      const std::string name = static_cast<std::size_t>(j) < ds.feature_names.size()
                                   ? ds.feature_names[static_cast<std::size_t>(j)]
                                   : "c" + std::to_string(j);
      std::clog << "warning: dropping zero-variance feature '" << name << "'\n";
      continue;
    }
    kept.push_back(j);
    sds.push_back(sd);
  }
  if (kept.empty()) throw InputError("normalize_unit_std: every feature has zero variance");

  LabeledDataset out;
  out.labels = ds.labels;
  out.label_names = ds.label_names;
  out.points.resize(n, static_cast<Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    out.points.col(static_cast<Index>(k)) = ds.points.col(kept[k]) / sds[k];
    if (static_cast<std::size_t>(kept[k]) < ds.feature_names.size()) {
      out.feature_names.push_back(ds.feature_names[static_cast<std::size_t>(kept[k])]);
    }
  }
  return out;
}

LabeledDataset gen_circles(std::uint64_t seed) {
  constexpr double kRadii[] = {1.0, 3.0, 5.0};
  constexpr Index kCounts[] = {200, 350, 700};
  Rng rng(seed);
  LabeledDataset ds;
  ds.points.resize(1250, 2);
  ds.feature_names = {"x", "y"};
  ds.label_names = {"0", "1", "2"};
  Partition truth;
  truth.num_clusters = 3;
  Index row = 0;
  for (int ring = 0; ring < 3; ++ring) {
    for (Index i = 0; i < kCounts[ring]; ++i, ++row) {
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double r = kRadii[ring] * (1.0 + rng.uniform(-0.1, 0.1));
      ds.points(row, 0) = r * std::cos(angle);
      ds.points(row, 1) = r * std::sin(angle);
      truth.labels.push_back(ring);
    }
  }
  ds.labels = truth;
  return ds;
}

LabeledGraph gen_sbm(std::uint64_t seed, double perturbation) {
  if (!(perturbation >= 0.0)) throw InputError("gen_sbm: perturbation must be nonnegative");
  constexpr Index kSmall = 10;
  constexpr Index kLarge = 1000;
  constexpr Index n = 2 * kSmall + kLarge;
  MatrixXd a = MatrixXd::Zero(n, n);
  a.block(0, 0, kSmall, kSmall).setConstant(0.1);
  a.block(kSmall, kSmall, kSmall, kSmall).setConstant(0.1);

  Rng root(seed);
  Rng sparse = root.split(0);
  for (Index i = 0; i < kLarge; ++i) {
    for (Index j = i + 1; j < kLarge; ++j) {
      if (sparse.uniform() < 0.05) {
        a(2 * kSmall + i, 2 * kSmall + j) = 0.001;
        a(2 * kSmall + j, 2 * kSmall + i) = 0.001;
      }
    }
  }
  Rng noise = root.split(1);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double e = perturbation > 0.0 ? noise.uniform(0.0, perturbation) : 0.0;
      a(i, j) += e;
      a(j, i) = a(i, j);
    }
  }
  a.diagonal().setZero();

  Partition truth;
  truth.num_clusters = 3;
  truth.labels.assign(kSmall, 0);
  truth.labels.insert(truth.labels.end(), kSmall, 1);
  truth.labels.insert(truth.labels.end(), kLarge, 2);
  return {SimilarityGraph(std::move(a)), std::move(truth)};
}

LabeledGraph gen_blocks(const std::vector<Index>& sizes, std::uint64_t seed, double lo,
                        double hi) {
  if (sizes.empty()) throw InputError("gen_blocks: no blocks");
  if (!(lo >= 0.0) || !(hi >= lo)) throw InputError("gen_blocks: need 0 <= lo <= hi");
  Index n = 0;
  for (Index s : sizes) {
    if (s < 1) throw InputError("gen_blocks: block sizes must be positive");
    n += s;
  }
  Rng rng(seed);
  MatrixXd a = MatrixXd::Zero(n, n);
  Partition truth;
  truth.num_clusters = static_cast<int>(sizes.size());
  Index offset = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    for (Index i = 0; i < sizes[b]; ++i) {
      truth.labels.push_back(static_cast<int>(b));
      for (Index j = i + 1; j < sizes[b]; ++j) {
        const double w = rng.uniform(lo, hi);
        a(offset + i, offset + j) = w;
        a(offset + j, offset + i) = w;
      }
    }
    offset += sizes[b];
  }
  return {SimilarityGraph(std::move(a)), std::move(truth)};
}

std::vector<Index> random_block_sizes(Index n, Index m, std::uint64_t seed, Index min_size) {
  if (m < 1 || n < m * min_size) {
    throw InputError("random_block_sizes: cannot split " + std::to_string(n) + " into " +
                     std::to_string(m) + " blocks of size >= " + std::to_string(min_size));
  }
  Rng rng(seed);
  std::vector<double> w(static_cast<std::size_t>(m));
  double total = 0.0;
  for (double& x : w) total += (x = rng.uniform(0.1, 1.0));
  const Index spare = n - m * min_size;
  std::vector<Index> sizes(static_cast<std::size_t>(m), min_size);
  Index used = 0;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    const auto extra = static_cast<Index>(std::floor(static_cast<double>(spare) * w[b] / total));
    sizes[b] += extra;
    used += extra;
  }
  for (std::size_t b = 0; used < spare; b = (b + 1) % sizes.size(), ++used) ++sizes[b];
  return sizes;
}

void write_dataset_csv(const LabeledDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.precision(17);
  for (Index j = 0; j < ds.points.cols(); ++j) {
    out << (static_cast<std::size_t>(j) < ds.feature_names.size()
                ? ds.feature_names[static_cast<std::size_t>(j)]
                : "c" + std::to_string(j))
        << ',';
  }
  out << "label\n";
  for (Index i = 0; i < ds.points.rows(); ++i) {
    for (Index j = 0; j < ds.points.cols(); ++j) out << ds.points(i, j) << ',';
    if (ds.labels) {
      const int l = ds.labels->labels[static_cast<std::size_t>(i)];
      if (static_cast<std::size_t>(l) < ds.label_names.size()) {
        out << ds.label_names[static_cast<std::size_t>(l)];
      } else {
        out << l;
      }
    }
    out << '\n';
  }
}

void write_adjacency_csv(const SimilarityGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.precision(17);
  const MatrixXd& a = g.adjacency();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out << (j > 0 ? "," : "") << a(i, j);
    out << '\n';
  }
}

MatrixXd load_matrix_csv(const std::string& path) {
  const auto rows = read_rows(path);
  const std::size_t width = rows.front().size();
  MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw InputError("'" + path + "' line " + std::to_string(r + 1) + " has " +
                       std::to_string(rows[r].size()) + " fields, expected " +
                       std::to_string(width));
    }
    for (std::size_t c = 0; c < width; ++c) {
      const auto v = parse_number(rows[r][c]);
      if (!v) {
        throw InputError("'" + path + "' line " + std::to_string(r + 1) + ", column " +
                         std::to_string(c + 1) + ": cannot parse '" + rows[r][c] + "'");
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) = *v;
    }
  }
  return m;
}

Partition load_labels(const std::string& path, std::vector<std::string>* names) {
  auto rows = read_rows(path);
  if (rows.front().size() == 1 && rows.front()[0] == "label") rows.erase(rows.begin());
  if (rows.empty()) throw InputError("'" + path + "' has no labels");
  std::vector<std::string> raw;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 1) {
      throw InputError("'" + path + "' line " + std::to_string(r + 1) +
                       ": expected one label per line");
    }
    raw.push_back(rows[r][0]);
  }
  return labels_from_strings(raw, names);
}

}  // namespace hbr
