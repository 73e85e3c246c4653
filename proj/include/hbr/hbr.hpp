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

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hbr/embedding.hpp"
#include "hbr/error.hpp"
#include "hbr/graph.hpp"
#include "hbr/linalg.hpp"
#include "hbr/parallel.hpp"
#include "hbr/random.hpp"

namespace hbr {

template <class F>
concept SphereObjective = requires(const F& f, const VectorXd& u) {
  { f.value(u) } -> std::convertible_to<double>;
  { f.gradient(u) } -> std::convertible_to<VectorXd>;
  { f.dim() } -> std::convertible_to<Index>;
};

/// Objective defined by data rows (needed by HBRenum).
template <class F>
concept RowObjective = SphereObjective<F> && requires(const F& f) {
  { f.points() } -> std::convertible_to<const MatrixXd&>;
};

struct AscentConfig {
  double eta = 0.1;
  int max_iters = 1000;
  double tol = 1e-8;
  bool deflate_every_step = true;
};

struct AscentResult {
  VectorXd u;
  int iterations = 0;
  bool converged = false;
  double value = 0.0;
  /// max |<u_t, c>| over iterates and deflation directions c.
  double max_deflation_residual = 0.0;
};

/// Projected gradient ascent on the unit sphere restricted to span(deflation)^perp:
///   u <- normalize(P(u + eta (grad - u u^T grad))).
/// The step is halved until F does not decrease; when no step of displacement
/// >= tol is accepted the iterate is stationary and the run is converged.
/// For objectives exposing kink_normals(u, tol), a step inside the face of a
/// nearby kink competes with the plain step.
/// Deflation vectors must be orthonormal.
template <SphereObjective F>
AscentResult ascend_on_sphere(const F& f, const VectorXd& start,
                              std::span<const VectorXd> deflation, const AscentConfig& cfg) {
  AscentResult r;
  auto residual = [&](const VectorXd& u) {
    double worst = 0.0;
    for (const VectorXd& c : deflation) worst = std::max(worst, std::abs(c.dot(u)));
    return worst;
  };
  r.u = project_orthogonal(start, deflation);
  const double start_norm = r.u.norm();
  if (!(start_norm > 1e-12)) throw NumericalError("ascent start lies in the deflated span");
  r.u /= start_norm;
  r.value = f.value(r.u);
  r.max_deflation_residual = residual(r.u);

  // Backtracking from `base` along `dir`: the first step of displacement
  // >= tol that keeps F from decreasing, if any.
  struct Step {
    VectorXd u;
    double value;
    double displacement;
  };
  auto try_step = [&](const VectorXd& base, const VectorXd& dir) -> std::optional<Step> {
    double step = cfg.eta;
    for (int halvings = 0; halvings < 200; ++halvings, step *= 0.5) {
      VectorXd next = base + step * dir;
      if (cfg.deflate_every_step) next = project_orthogonal(next, deflation);
      const double norm = next.norm();
      if (!(norm > 1e-12)) continue;
      next /= norm;
      if (!next.allFinite() || (next - base).norm() < cfg.tol) return std::nullopt;
      const double displacement = (next - r.u).norm();
      const double value = f.value(next);
      if (value >= r.value) return Step{std::move(next), value, displacement};
    }
    return std::nullopt;
  };

  double last_move = cfg.eta;
  for (r.iterations = 0; r.iterations < cfg.max_iters;) {
    const VectorXd grad = f.gradient(r.u);
    const VectorXd tangent = grad - r.u * r.u.dot(grad);
    if (!tangent.allFinite()) throw NumericalError("ascent: non-finite gradient");
    std::optional<Step> step = try_step(r.u, tangent);
    if constexpr (requires { f.kink_normals(r.u, 1e-6); }) {
      // Near a kink also try snapping the kinked projections to zero: the
      // snapped point itself, a step inside the face where they stay zero
      // and, when still stuck, steps along the ridge of a single kinked row
      // (which escape thin wedges between nearly parallel ridges). The snap
      // radius follows the last move, then falls back to 1e-6.
      auto consider = [&](std::optional<Step> alt) {
        if (alt && (!step || alt->value > step->value)) step = std::move(alt);
      };
      const double adaptive = std::clamp(2.0 * last_move, 1e-6, 1e-2);
      for (double snap : {adaptive, 1e-6}) {
        const MatrixXd normals = f.kink_normals(r.u, snap);
        if (normals.cols() == 0) break;
        const MatrixXd keep = orthogonal_complement(normals);
        VectorXd kept = keep * (keep.transpose() * r.u);
        if (cfg.deflate_every_step) kept = project_orthogonal(kept, deflation);
        if (kept.norm() > 0.5) {
          const VectorXd base = kept.normalized();
          MatrixXd span(base.size(), normals.cols() + 1);
          span << base, normals;
          const MatrixXd face = orthogonal_complement(span);
          const VectorXd base_grad = f.gradient(base);
          const double base_value = f.value(base);
          const double base_move = (base - r.u).norm();
          if (base_value >= r.value && base_move >= cfg.tol) {
            consider(Step{base, base_value, base_move});
          }
          const VectorXd dir = face * (face.transpose() * base_grad);
          if (dir.allFinite()) consider(try_step(base, dir));
          for (Index i = 0; !step && i < std::min<Index>(normals.cols(), 32); ++i) {
            MatrixXd pair(base.size(), 2);
            pair << base, normals.col(i);
            const MatrixXd ridge = orthogonal_complement(pair);
            // The sign of the remaining kink terms is arbitrary, so try both ways.
            const VectorXd along = ridge * (ridge.transpose() * base_grad);
            if (!along.allFinite()) continue;
            consider(try_step(base, along));
            if (!step) consider(try_step(base, -along));
          }
        }
        if (step || snap == 1e-6) break;
      }
    }
    if (!step) {
      r.converged = true;
      break;
    }
    r.u = std::move(step->u);
    r.value = step->value;
    last_move = step->displacement;
    ++r.iterations;
    r.max_deflation_residual = std::max(r.max_deflation_residual, residual(r.u));
    if (step->displacement < cfg.tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

struct HbrOptConfig {
  double eta = 0.1;
  int max_iters = 1000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool deflate_every_step = true;

  void validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw InputError("eta must be positive");
    if (!(tol > 0.0)) throw InputError("tol must be positive");
    if (max_iters < 1) throw InputError("max_iters must be at least 1");
  }
};

struct HbrEnumConfig {
  double delta = 3.0 * std::numbers::pi / 8.0;

  void validate() const {
    if (!(delta > 0.0) || delta > std::numbers::pi / 2.0) {
      throw InputError("delta must lie in (0, pi/2]");
    }
  }
};

struct RecoveredBasis {
  std::vector<VectorXd> centers;
  std::vector<int> iterations;
  std::vector<double> objective_values;
  std::vector<bool> converged;
  double max_deflation_residual = 0.0;

  /// |<c_i, c_j>| for all pairs.
  MatrixXd overlaps() const {
    const auto k = static_cast<Index>(centers.size());
    MatrixXd o(k, k);
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) {
        o(i, j) = std::abs(centers[static_cast<std::size_t>(i)].dot(
            centers[static_cast<std::size_t>(j)]));
      }
    }
    return o;
  }
};

/// HBRopt. Center k starts from a uniform draw on the sphere (or starts[k]
/// when given), projected off the previous centers, and ascends with deflation.
/// Non-converged centers are flagged, not thrown.
template <SphereObjective F>
RecoveredBasis hbr_opt(const F& f, Index m, const HbrOptConfig& cfg,
                       std::span<const VectorXd> starts = {}) {
  cfg.validate();
  const Index dim = f.dim();
  if (m < 1 || m > dim) {
    throw InputError("hbr_opt: m = " + std::to_string(m) + " exceeds the embedding dimension " +
                     std::to_string(dim));
  }
  Rng rng(cfg.seed);
  const AscentConfig ascent{cfg.eta, cfg.max_iters, cfg.tol, cfg.deflate_every_step};
  RecoveredBasis basis;
  for (Index k = 0; k < m; ++k) {
    VectorXd u0;
    const std::span<const VectorXd> found(basis.centers);
    if (static_cast<std::size_t>(k) < starts.size()) {
      u0 = starts[static_cast<std::size_t>(k)];
    } else {
      do {
        u0 = project_orthogonal(rng.unit_vector(dim), found);
      } while (u0.norm() < 1e-6);
    }
    AscentResult r = ascend_on_sphere(f, u0, found, ascent);
    // Clean up rounding so later deflations see an orthonormal set.
    VectorXd c = project_orthogonal(r.u, found);
    c.normalize();
    basis.centers.push_back(c);
    basis.iterations.push_back(r.iterations);
    basis.objective_values.push_back(f.value(c));
    basis.converged.push_back(r.converged);
    basis.max_deflation_residual = std::max(basis.max_deflation_residual, r.max_deflation_residual);
  }
  return basis;
}

/// HBRenum. F is evaluated once per nonzero row at x_i/|x_i|; rows are then
/// taken greedily by decreasing value (ties to the lower index), keeping those
/// at angle > delta from every chosen center. Zero rows are skipped.
/// Throws ExhaustionError when fewer than m rows qualify.
template <RowObjective F>
RecoveredBasis hbr_enum(const F& f, Index m, const HbrEnumConfig& cfg) {
  cfg.validate();
  const MatrixXd& x = f.points();
  const Index n = x.rows();
  if (m < 1 || m > n) {
    throw InputError("hbr_enum: m = " + std::to_string(m) + " must lie in [1, " +
                     std::to_string(n) + "]");
  }
  std::vector<char> usable(static_cast<std::size_t>(n), 0);
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  Index zero_rows = 0;
  for (Index i = 0; i < n; ++i) {
    if (x.row(i).norm() > 0.0) {
      usable[static_cast<std::size_t>(i)] = 1;
    } else {
      ++zero_rows;
    }
  }
  if (zero_rows > 0) {
    std::clog << "hbr_enum: skipping " << zero_rows << " zero embedded rows\n";
  }
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    if (!usable[i]) return;
    const VectorXd row = x.row(static_cast<Index>(i)).transpose();
    values[i] = f.value(row / row.norm());
  });

  std::vector<Index> order;
  for (Index i = 0; i < n; ++i) {
    if (usable[static_cast<std::size_t>(i)]) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
  });

  RecoveredBasis basis;
  for (Index i : order) {
    if (static_cast<Index>(basis.centers.size()) == m) break;
    VectorXd c = x.row(i).transpose();
    c.normalize();
    bool separated = true;
    for (const VectorXd& prev : basis.centers) {
      if (!(angle_between(c, prev) > cfg.delta)) {
        separated = false;
        break;
      }
    }
    if (!separated) continue;
    basis.centers.push_back(c);
    basis.iterations.push_back(0);
    basis.objective_values.push_back(values[static_cast<std::size_t>(i)]);
    basis.converged.push_back(true);
  }
  if (static_cast<Index>(basis.centers.size()) < m) {
    throw ExhaustionError(static_cast<long>(basis.centers.size()), static_cast<long>(m));
  }
  return basis;
}

/// label_i = argmax_l |<c_l, x_i>| (ties to the lowest l). Zero rows get
/// label 0 and are flagged.
Partition assign_clusters(const RecoveredBasis& basis, const MatrixXd& points);

inline Partition assign_clusters(const RecoveredBasis& basis, const Embedding& x) {
  return assign_clusters(basis, x.points);
}

}  // namespace hbr
