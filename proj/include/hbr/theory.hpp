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

#include "hbr/contrasts.hpp"
#include "hbr/graph.hpp"
#include "hbr/linalg.hpp"
#include "hbr/random.hpp"

namespace hbr {

/// F(u) = sum_i alpha_i g(beta_i |<u, Z_i>|) with orthonormal columns Z_i.
class WeightedBasisObjective {
 public:
  WeightedBasisObjective(MatrixXd basis, VectorXd alpha, VectorXd beta, Contrast contrast);

  /// Random orthogonal basis with spectral weights from cluster fractions w_i ~ U(0.5, 1.5), normalized.
  static WeightedBasisObjective random(Index m, const Contrast& contrast, Rng& rng);
  /// alpha_i = w_i, beta_i = 1/sqrt(w_i): the form F takes on a clean embedding.
  static WeightedBasisObjective spectral(const MatrixXd& basis, const VectorXd& weights,
                                         const Contrast& contrast);

  Index dim() const { return basis_.rows(); }
  const MatrixXd& basis() const { return basis_; }
  const VectorXd& alpha() const { return alpha_; }
  const VectorXd& beta() const { return beta_; }
  const Contrast& contrast() const { return contrast_; }

  double value(const VectorXd& u) const;
  VectorXd gradient(const VectorXd& u) const;
  MatrixXd hessian(const VectorXd& u) const;
  bool near_kink(const VectorXd& u, double tol = 1e-7) const;
  /// Basis columns Z_i with |<u, Z_i>| < tol; empty for smooth contrasts.
  MatrixXd kink_normals(const VectorXd& u, double tol = 1e-7) const;

 private:
  MatrixXd basis_;
  VectorXd alpha_;
  VectorXd beta_;
  Contrast contrast_;
};

/// psi(u)_i = <u, Z_i>^2.
VectorXd simplex_point(const WeightedBasisObjective& f, const VectorXd& u);

/// H(t) = sum_i alpha_i g(beta_i sqrt(t_i)) on the simplex; H(psi(u)) = F(u).
class SimplexObjective {
 public:
  explicit SimplexObjective(const WeightedBasisObjective& f) : f_(f) {}
  double value(const VectorXd& t) const;

 private:
  const WeightedBasisObjective& f_;
};

/// Gnomonic chart around v: pi_v(u) = (<u, p_i> / <u, v>)_i.
class SphereChart {
 public:
  explicit SphereChart(const VectorXd& v);

  const VectorXd& base() const { return v_; }
  /// Columns p_1..p_{m-1}: an orthonormal basis of v^perp.
  const MatrixXd& tangent() const { return p_; }

  VectorXd to_chart(const VectorXd& u) const;
  VectorXd from_chart(const VectorXd& x) const;

 private:
  VectorXd v_;
  MatrixXd p_;
};

struct ChartDerivatives {
  VectorXd gradient;
  MatrixXd hessian;
};

/// Derivatives of f o pi_v^{-1} at 0 from the ambient gradient and Hessian:
/// grad_i = <grad f(v), p_i>, hess_ij = p_i^T Hess f(v) p_j - <grad f(v), v> delta_ij.
template <class F>
ChartDerivatives chart_derivatives(const SphereChart& chart, const F& f) {
  const VectorXd& v = chart.base();
  const MatrixXd& p = chart.tangent();
  const VectorXd g = f.gradient(v);
  ChartDerivatives d;
  d.gradient = p.transpose() * g;
  d.hessian = p.transpose() * f.hessian(v) * p;
  d.hessian.diagonal().array() -= g.dot(v);
  return d;
}

/// Central differences of f o pi_v^{-1} at 0: step h for the gradient, 10 h
/// for the Hessian.
template <class F>
ChartDerivatives chart_derivatives_fd(const SphereChart& chart, const F& f, double h = 1e-5) {
  const Index k = chart.tangent().cols();
  auto at = [&](const VectorXd& x) { return f.value(chart.from_chart(x)); };
  ChartDerivatives d{VectorXd(k), MatrixXd(k, k)};
  for (Index i = 0; i < k; ++i) {
    const VectorXd e = VectorXd::Unit(k, i) * h;
    d.gradient(i) = (at(e) - at(-e)) / (2.0 * h);
  }
  const double s = 10.0 * h;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const VectorXd a = VectorXd::Unit(k, i) * s;
      const VectorXd b = VectorXd::Unit(k, j) * s;
      d.hessian(i, j) = (at(a + b) - at(a - b) - at(b - a) + at(-a - b)) / (4.0 * s * s);
    }
  }
  return d;
}

struct PointCertificate {
  VectorXd u;
  double value = 0.0;
  double chart_gradient_norm = 0.0;
  double chart_hessian_max = 0.0;
  /// Certified by probes only because u sits on a kink of the objective.
  bool kink = false;
  /// Smallest F(u) - F(probe) over the probes.
  double probe_margin = 0.0;
  bool local_max = false;
};

/// Chart gradient norm < 1e-6, chart Hessian max eigenvalue < 1e-6 and F(u)
/// strictly above the 2(m-1) axis probes at `radius`. At kinks only the probe
/// test applies, with 16 extra random tangent probes and probes along the
/// ridges of the kinked rows and along the gradient.
PointCertificate certify_local_max(const WeightedBasisObjective& f, const VectorXd& u,
                                   double radius = 1e-4);
PointCertificate certify_local_max(const EmpiricalObjective& f, const VectorXd& u,
                                   double radius = 1e-4);

struct EnumerationConfig {
  /// 0 means 50 m.
  int starts = 0;
  int max_iters = 10000;
  double eta = 0.1;
  double tol = 1e-10;
  /// Angular tolerance for merging maxima.
  double dedup_tol = 1e-3;
  /// A certified maximum farther than this from every +-reference direction is spurious.
  double match_tol = 1e-3;
  /// For m >= 4, double the start count until the found set is stable twice.
  bool adaptive = true;
  std::uint64_t seed = 0;
};

struct MaximaCertificate {
  /// Distinct certified maxima (signed).
  std::vector<VectorXd> found_maxima;
  std::vector<double> values;
  /// Angle from each found maximum to the nearest +-reference direction.
  std::vector<double> angular_errors;
  std::vector<VectorXd> spurious;
  int signed_classes = 0;
  /// Classes modulo sign.
  int lines = 0;
  int starts = 0;
  int not_converged = 0;
  /// Converged ascents whose endpoint failed certification.
  int rejected = 0;
  /// Rejected endpoints farther than match_tol from every reference direction.
  int rejected_far = 0;
  /// Largest angle from a rejected endpoint to the nearest +-reference direction.
  double max_rejected_distance = 0.0;
  /// Every +-reference direction has a found maximum within match_tol.
  bool all_reference_found = false;
  /// F is constant with vanishing chart gradient at every sampled point.
  bool flat_landscape = false;

  bool complete() const { return all_reference_found && spurious.empty(); }
};

/// Multistart projected ascent (no deflation) followed by certification.
/// `reference` holds the expected directions as columns.
MaximaCertificate enumerate_maxima(const WeightedBasisObjective& f, const MatrixXd& reference,
                                   const EnumerationConfig& cfg);
MaximaCertificate enumerate_maxima(const EmpiricalObjective& f, const MatrixXd& reference,
                                   const EnumerationConfig& cfg);
inline MaximaCertificate enumerate_maxima(const WeightedBasisObjective& f,
                                          const EnumerationConfig& cfg) {
  return enumerate_maxima(f, f.basis(), cfg);
}

struct GridOracleResult {
  int grid_points = 0;
  int discrete_maxima = 0;
  /// Polished candidates that failed certify_local_max.
  int rejected = 0;
  /// Distinct polished maxima.
  std::vector<VectorXd> maxima;
  bool all_on_basis = false;
  bool all_basis_hit = false;

  bool ok() const { return all_on_basis && all_basis_hit; }
};

/// Brute-force oracle for m = 2 or 3: evaluates F on about `points` sphere
/// directions, polishes every discrete local maximum by ascent, keeps the
/// polished points that certify and compares them with +-Z_i (angular
/// tolerance `tol`).
GridOracleResult dense_grid_maxima(const WeightedBasisObjective& f, int points = 100000,
                                   double tol = 1e-3);

struct ConvexityCounterexample {
  /// A point with h'' < 0 was found.
  bool violation_found = false;
  /// h is affine on a run of the scan grid (h'' = 0 to 1e-10).
  bool plateau = false;
  double t = 0.0;
  VectorXd alpha;
  VectorXd beta;
  VectorXd point;
  PointCertificate certificate;
  /// max |H'(x)| near x = 1/2 for the plateau case.
  double plateau_derivative_max = 0.0;
  std::string verdict;
};

/// Scans h'' on [lo, hi]. For h''(t) < 0 builds alpha = (1/(2t), 1/(2t)),
/// beta_i = 1/sqrt(alpha_i) and certifies (1/sqrt2, 1/sqrt2) as a strict local
/// maximum. Reports a plateau when h is affine on a run of grid points, and
/// "P1 holds on range" otherwise.
ConvexityCounterexample necessity_counterexample_convexity(const Contrast& g, double lo = 1e-3,
                                                           double hi = 10.0, int grid = 2000);

struct P2Counterexample {
  OriginSlopeEstimate slope;
  VectorXd alpha;
  VectorXd beta;
  /// Case h'(0) > 0: M = h'(beta^2). Case h'(0) < 0: the threshold delta.
  double constant = 0.0;
  double radius = 0.0;
  /// F(best probe) - F(e_1).
  double improvement = 0.0;
  VectorXd improving_point;
  bool certified = false;
  std::string verdict;
};

/// Builds weights under which e_1 is not a local maximum for a contrast with
/// P1 and a finite nonzero h'(0+). Throws InputError when P2 holds or P1
/// fails, NumericalError when h'(0+) cannot be classified.
P2Counterexample necessity_counterexample_p2(const Contrast& g, Index m = 2);

struct PerturbationTrial {
  double h_norm = 0.0;
  double eigengap = 0.0;
  double deviation = 0.0;
  double bound = 0.0;
  bool maxima_checked = false;
  int maxima_found = 0;
  int spurious = 0;
  int rejected_far = 0;
  /// Largest angle from a found maximum to the nearest +-R^T Z_i.
  double localization_radius = 0.0;
  bool skipped = false;
  std::string reason;
};

struct PerturbationConfig {
  int trials = 50;
  /// ||H|| is drawn uniformly in (0, noise_scale * delta(L)].
  double noise_scale = 0.5;
  /// Maxima are enumerated only when ||H|| <= maxima_scale * delta(L).
  double maxima_scale = 0.25;
  /// Maxima farther than this from every +-R^T Z_i are spurious.
  double spurious_threshold = 0.5;
  int starts = 0;
  std::uint64_t seed = 0;
  LaplacianKind kind = LaplacianKind::kUnnormalized;
};

struct PerturbationReport {
  std::vector<PerturbationTrial> trials;
  double max_bound_ratio = 0.0;
  bool bound_holds = true;
  int total_spurious = 0;
  int total_rejected_far = 0;
  /// max over checked trials of radius / (||H|| / delta)^(1/3).
  double max_radius_ratio = 0.0;
};

/// Perturbs the Laplacian of a graph with m exact components by random
/// symmetric H, checks the Procrustes deviation bound 2||H||/(delta - ||H||)
/// and enumerates the maxima of the perturbed objective.
PerturbationReport perturbation_experiment(const SimilarityGraph& g, Index m,
                                           const Contrast& contrast,
                                           const PerturbationConfig& cfg);

}  // namespace hbr
