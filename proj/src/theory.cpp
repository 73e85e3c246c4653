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

#include "hbr/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "hbr/embedding.hpp"
#include "hbr/error.hpp"
#include "hbr/hbr.hpp"
#include "hbr/parallel.hpp"

namespace hbr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Smallest angle between u and +-columns of `reference`.
double distance_to_lines(const VectorXd& u, const MatrixXd& reference) {
  double best = kInf;
  for (Index j = 0; j < reference.cols(); ++j) {
    best = std::min(best, line_angle(u, reference.col(j)));
  }
  return best;
}

// Probe margin F(u) - max F(probe) on geodesic circles of the given radius.
template <class F>
double probe_margin(const F& f, const VectorXd& u, const MatrixXd& tangent, double radius,
                    int random_probes, double value) {
  double margin = kInf;
  auto probe = [&](const VectorXd& dir) {
    const VectorXd q = std::cos(radius) * u + std::sin(radius) * dir;
    margin = std::min(margin, value - f.value(q.normalized()));
  };
  for (Index i = 0; i < tangent.cols(); ++i) {
    probe(tangent.col(i));
    probe(-tangent.col(i));
  }
  Rng rng(0x5eed5eedULL);
  for (int k = 0; k < random_probes && tangent.cols() > 0; ++k) {
    probe((tangent * rng.gaussian_vector(tangent.cols())).normalized());
  }
  return margin;
}

// Orthonormal basis of the complement of span(u, normals).
MatrixXd face_tangent(const VectorXd& u, const MatrixXd& normals) {
  MatrixXd a(u.size(), normals.cols() + 1);
  a.col(0) = u;
  a.rightCols(normals.cols()) = normals;
  return orthogonal_complement(a);
}

template <class F>
PointCertificate certify_impl(const F& f, const VectorXd& u_in, double radius) {
  PointCertificate c;
  c.u = u_in.normalized();
  c.value = f.value(c.u);
  if (f.dim() == 1) {
    c.local_max = true;
    return c;
  }
  const SphereChart chart(c.u);
  c.kink = f.near_kink(c.u);
  c.probe_margin = probe_margin(f, c.u, chart.tangent(), radius, c.kink ? 16 : 0, c.value);
  if (c.kink) {
    // F is piecewise smooth around u, so its best first-order direction lies
    // along a ridge (the face of one or two kinked rows), inside the face of
    // all of them, or along the gradient.
    const MatrixXd normals = f.kink_normals(c.u);
    const Index k = std::min<Index>(normals.cols(), 32);
    std::vector<MatrixXd> faces{face_tangent(c.u, normals)};
    for (Index i = 0; i < k; ++i) faces.push_back(face_tangent(c.u, normals.col(i)));
    if (f.dim() >= 4) {
      for (Index i = 0; i < k; ++i) {
        for (Index j = i + 1; j < k; ++j) {
          MatrixXd pair(f.dim(), 2);
          pair << normals.col(i), normals.col(j);
          faces.push_back(face_tangent(c.u, pair));
        }
      }
    }
    const VectorXd grad = f.gradient(c.u);
    for (const MatrixXd& face : faces) {
      if (face.cols() == 0) continue;
      c.probe_margin = std::min(c.probe_margin, probe_margin(f, c.u, face, radius, 0, c.value));
      const VectorXd along = face * (face.transpose() * grad);
      if (along.norm() > 0.0) {
        c.probe_margin = std::min(c.probe_margin,
                                  probe_margin(f, c.u, along.normalized(), radius, 0, c.value));
      }
    }
    const VectorXd tangent = chart.tangent() * (chart.tangent().transpose() * grad);
    if (tangent.norm() > 0.0) {
      c.probe_margin = std::min(c.probe_margin,
                                probe_margin(f, c.u, tangent.normalized(), radius, 0, c.value));
    }
  }
  const bool probes_ok = c.probe_margin > 1e-13 * (1.0 + std::abs(c.value));
  if (c.kink) {
    c.local_max = probes_ok;
    return c;
  }
  const ChartDerivatives d = chart_derivatives(chart, f);
  c.chart_gradient_norm = d.gradient.norm();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(d.hessian, Eigen::EigenvaluesOnly);
  c.chart_hessian_max = eig.eigenvalues().maxCoeff();
  c.local_max = probes_ok && c.chart_gradient_norm < 1e-6 && c.chart_hessian_max < 1e-6;
  return c;
}

template <class F>
bool looks_flat(const F& f, std::uint64_t seed) {
  const Index m = f.dim();
  double lo = kInf, hi = -kInf, grad = 0.0;
  for (int k = 0; k < 8; ++k) {
    Rng rng(derive_seed(seed ^ 0xf1a7f1a7ULL, static_cast<std::uint64_t>(k)));
    const VectorXd u = rng.unit_vector(m);
    const double v = f.value(u);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    const VectorXd g = f.gradient(u);
    grad = std::max(grad, (g - u * u.dot(g)).norm());
  }
  return hi - lo <= 1e-12 * (1.0 + std::abs(hi)) && grad <= 1e-9 * (1.0 + std::abs(hi));
}

template <class F>
MaximaCertificate enumerate_impl(const F& f, const MatrixXd& reference,
                                 const EnumerationConfig& cfg) {
  const Index m = f.dim();
  if (reference.rows() != m) {
    throw StructuralError("enumerate_maxima: reference directions have the wrong dimension");
  }
  MaximaCertificate cert;
  // S^0 is two isolated points, both maxima; only m >= 2 can be flat.
  if (m >= 2 && looks_flat(f, cfg.seed)) {
    cert.flat_landscape = true;
    return cert;
  }
  const int base = cfg.starts > 0 ? cfg.starts : static_cast<int>(50 * m);
  const AscentConfig ascent{cfg.eta, cfg.max_iters, cfg.tol, false};

  auto run_batch = [&](int begin, int end) {
    std::vector<AscentResult> results(static_cast<std::size_t>(end - begin));
    std::vector<PointCertificate> certs(results.size());
    parallel_for(results.size(), [&](std::size_t k) {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(begin) + k));
      results[k] = ascend_on_sphere(f, rng.unit_vector(m), {}, ascent);
      if (results[k].converged) certs[k] = certify_impl(f, results[k].u, 1e-4);
    });
    for (std::size_t k = 0; k < results.size(); ++k) {
      ++cert.starts;
      if (!results[k].converged) {
        ++cert.not_converged;
        continue;
      }
      if (!certs[k].local_max) {
        ++cert.rejected;
        const double d = distance_to_lines(results[k].u, reference);
        cert.max_rejected_distance = std::max(cert.max_rejected_distance, d);
        if (d > cfg.match_tol) ++cert.rejected_far;
        continue;
      }
      const VectorXd& u = certs[k].u;
      const bool known = std::any_of(cert.found_maxima.begin(), cert.found_maxima.end(),
                                     [&](const VectorXd& v) {
                                       return angle_between(u, v) < cfg.dedup_tol;
                                     });
      if (!known) {
        cert.found_maxima.push_back(u);
        cert.values.push_back(certs[k].value);
      }
    }
  };

  run_batch(0, base);
  if (cfg.adaptive && m >= 4) {
    int total = base;
    int stable = 0;
    while (stable < 2 && total < 64 * base) {
      const std::size_t before = cert.found_maxima.size();
      run_batch(total, 2 * total);
      total *= 2;
      stable = cert.found_maxima.size() == before ? stable + 1 : 0;
    }
  }

  cert.signed_classes = static_cast<int>(cert.found_maxima.size());
  std::vector<VectorXd> lines;
  for (const VectorXd& u : cert.found_maxima) {
    const double d = distance_to_lines(u, reference);
    cert.angular_errors.push_back(d);
    if (d > cfg.match_tol) cert.spurious.push_back(u);
    const bool known = std::any_of(lines.begin(), lines.end(), [&](const VectorXd& v) {
      return line_angle(u, v) < cfg.dedup_tol;
    });
    if (!known) lines.push_back(u);
  }
  cert.lines = static_cast<int>(lines.size());
  cert.all_reference_found = true;
  for (Index j = 0; j < reference.cols(); ++j) {
    const VectorXd z = reference.col(j).normalized();
    for (double s : {1.0, -1.0}) {
      const bool hit = std::any_of(cert.found_maxima.begin(), cert.found_maxima.end(),
                                   [&](const VectorXd& u) {
                                     return angle_between(u, s * z) < cfg.match_tol;
                                   });
      cert.all_reference_found = cert.all_reference_found && hit;
    }
  }
  return cert;
}

// Probes e_1 along +-e_k on geodesic circles, growing the radius until some
// probe improves F by more than 1e-12 (1 + |F|).
void certify_not_max(const WeightedBasisObjective& f, P2Counterexample& out) {
  const Index m = f.dim();
  const VectorXd e1 = VectorXd::Unit(m, 0);
  const double base = f.value(e1);
  for (double r : {1e-4, 1e-3, 1e-2, 1e-1, 0.3}) {
    double best = -kInf;
    VectorXd best_point;
    for (Index k = 1; k < m; ++k) {
      for (double s : {1.0, -1.0}) {
        const VectorXd q = std::cos(r) * e1 + s * std::sin(r) * VectorXd::Unit(m, k);
        const double gain = f.value(q) - base;
        if (gain > best) {
          best = gain;
          best_point = q;
        }
      }
    }
    out.radius = r;
    out.improvement = best;
    out.improving_point = best_point;
    if (best > 1e-12 * (1.0 + std::abs(base))) {
      out.certified = true;
      return;
    }
  }
}

}  // namespace

WeightedBasisObjective::WeightedBasisObjective(MatrixXd basis, VectorXd alpha, VectorXd beta,
                                               Contrast contrast)
    : basis_(std::move(basis)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      contrast_(std::move(contrast)) {
  const Index m = basis_.rows();
  if (m < 1 || basis_.cols() != m) {
    throw StructuralError("weighted basis objective needs a square basis");
  }
  const MatrixXd gram = basis_.transpose() * basis_ - MatrixXd::Identity(m, m);
  if (gram.cwiseAbs().maxCoeff() > 1e-10) {
    throw StructuralError("weighted basis objective: basis is not orthonormal");
  }
  if (alpha_.size() != m || beta_.size() != m) {
    throw StructuralError("weighted basis objective: alpha and beta need one entry per direction");
  }
  if (!(alpha_.minCoeff() > 0.0) || !(beta_.minCoeff() > 0.0)) {
    throw InputError("weighted basis objective: weights must be positive");
  }
}

WeightedBasisObjective WeightedBasisObjective::random(Index m, const Contrast& contrast,
                                                      Rng& rng) {
  MatrixXd g(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) g(i, j) = rng.normal();
  }
  const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(g).householderQ();
  VectorXd w(m);
  for (Index i = 0; i < m; ++i) w(i) = rng.uniform(0.5, 1.5);
  return spectral(q, w / w.sum(), contrast);
}

WeightedBasisObjective WeightedBasisObjective::spectral(const MatrixXd& basis,
                                                        const VectorXd& weights,
                                                        const Contrast& contrast) {
  return WeightedBasisObjective(basis, weights, weights.cwiseSqrt().cwiseInverse(), contrast);
}

double WeightedBasisObjective::value(const VectorXd& u) const {
  const VectorXd c = basis_.transpose() * u;
  double sum = 0.0;
  for (Index i = 0; i < c.size(); ++i) sum += alpha_(i) * contrast_.g(beta_(i) * std::abs(c(i)));
  return sum;
}

VectorXd WeightedBasisObjective::gradient(const VectorXd& u) const {
  const VectorXd c = basis_.transpose() * u;
  VectorXd w(c.size());
  for (Index i = 0; i < c.size(); ++i) {
    w(i) = c(i) == 0.0
               ? 0.0
               : alpha_(i) * beta_(i) * contrast_.dg(beta_(i) * std::abs(c(i))) * sign_of(c(i));
  }
  return basis_ * w;
}

MatrixXd WeightedBasisObjective::hessian(const VectorXd& u) const {
  const VectorXd c = basis_.transpose() * u;
  VectorXd w(c.size());
  for (Index i = 0; i < c.size(); ++i) {
    w(i) = alpha_(i) * beta_(i) * beta_(i) * contrast_.d2g(beta_(i) * std::abs(c(i)));
  }
  return basis_ * w.asDiagonal() * basis_.transpose();
}

bool WeightedBasisObjective::near_kink(const VectorXd& u, double tol) const {
  if (!contrast_.kinked()) return false;
  return (basis_.transpose() * u).cwiseAbs().minCoeff() < tol;
}

MatrixXd WeightedBasisObjective::kink_normals(const VectorXd& u, double tol) const {
  if (!contrast_.kinked()) return MatrixXd(dim(), 0);
  const VectorXd c = basis_.transpose() * u;
  std::vector<Index> cols;
  for (Index i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) < tol) cols.push_back(i);
  }
  MatrixXd out(dim(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = basis_.col(cols[k]);
  return out;
}

VectorXd simplex_point(const WeightedBasisObjective& f, const VectorXd& u) {
  return (f.basis().transpose() * u).array().square().matrix();
}

double SimplexObjective::value(const VectorXd& t) const {
  double sum = 0.0;
  for (Index i = 0; i < t.size(); ++i) {
    sum += f_.alpha()(i) * f_.contrast().g(f_.beta()(i) * std::sqrt(std::max(t(i), 0.0)));
  }
  return sum;
}

SphereChart::SphereChart(const VectorXd& v) : v_(v.normalized()) {
  const Index m = v_.size();
  const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(v_).householderQ();
  p_ = q.rightCols(m - 1);
}

VectorXd SphereChart::to_chart(const VectorXd& u) const {
  const double h = u.dot(v_);
  if (!(h > 0.0)) throw InputError("chart point must lie in the open hemisphere around v");
  return p_.transpose() * u / h;
}

VectorXd SphereChart::from_chart(const VectorXd& x) const {
  return (v_ + p_ * x) / std::sqrt(1.0 + x.squaredNorm());
}

PointCertificate certify_local_max(const WeightedBasisObjective& f, const VectorXd& u,
                                   double radius) {
  return certify_impl(f, u, radius);
}

PointCertificate certify_local_max(const EmpiricalObjective& f, const VectorXd& u,
                                   double radius) {
  return certify_impl(f, u, radius);
}

MaximaCertificate enumerate_maxima(const WeightedBasisObjective& f, const MatrixXd& reference,
                                   const EnumerationConfig& cfg) {
  return enumerate_impl(f, reference, cfg);
}

MaximaCertificate enumerate_maxima(const EmpiricalObjective& f, const MatrixXd& reference,
                                   const EnumerationConfig& cfg) {
  return enumerate_impl(f, reference, cfg);
}

GridOracleResult dense_grid_maxima(const WeightedBasisObjective& f, int points, double tol) {
  const Index m = f.dim();
  if (m != 2 && m != 3) throw InputError("dense_grid_maxima supports m = 2 or 3 only");
  if (points < 16) throw InputError("dense_grid_maxima needs at least 16 points");

  std::vector<VectorXd> dirs;
  std::vector<std::vector<int>> neighbors;
  if (m == 2) {
    for (int k = 0; k < points; ++k) {
      const double t = 2.0 * std::numbers::pi * (k + 0.5) / points;
      dirs.push_back((VectorXd(2) << std::cos(t), std::sin(t)).finished());
      neighbors.push_back({(k + points - 1) % points, (k + 1) % points});
    }
  } else {
    const int rings = std::max(4, static_cast<int>(std::lround(std::sqrt(points / 2.0))));
    const int per_ring = 2 * rings;
    auto wrap = [&](int j) { return ((j % per_ring) + per_ring) % per_ring; };
    for (int i = 0; i < rings; ++i) {
      const double theta = std::numbers::pi * (i + 0.5) / rings;
      for (int j = 0; j < per_ring; ++j) {
        const double phi = 2.0 * std::numbers::pi * (j + 0.5) / per_ring;
        dirs.push_back((VectorXd(3) << std::sin(theta) * std::cos(phi),
                        std::sin(theta) * std::sin(phi), std::cos(theta))
                           .finished());
        std::vector<int> nb;
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            if (di == 0 && dj == 0) continue;
            // Across a pole the neighbor sits on the same ring, half a turn away.
            const int ii = i + di;
            const int jj = j + dj;
            nb.push_back(ii < 0 || ii >= rings ? i * per_ring + wrap(jj + per_ring / 2)
                                               : ii * per_ring + wrap(jj));
          }
        }
        neighbors.push_back(std::move(nb));
      }
    }
  }

  GridOracleResult out;
  out.grid_points = static_cast<int>(dirs.size());
  std::vector<double> values(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t k) { values[k] = f.value(dirs[k]); });

  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    bool is_max = true;
    for (int q : neighbors[k]) {
      const auto qi = static_cast<std::size_t>(q);
      if (values[qi] > values[k] || (values[qi] == values[k] && qi < k)) {
        is_max = false;
        break;
      }
    }
    if (is_max) candidates.push_back(k);
  }
  out.discrete_maxima = static_cast<int>(candidates.size());

  const AscentConfig polish{0.1, 10000, 1e-12, false};
  std::vector<VectorXd> polished(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t k) {
    polished[k] = ascend_on_sphere(f, dirs[candidates[k]], {}, polish).u;
  });
  for (const VectorXd& u : polished) {
    if (!certify_local_max(f, u).local_max) {
      ++out.rejected;
      continue;
    }
    const bool known = std::any_of(out.maxima.begin(), out.maxima.end(),
                                   [&](const VectorXd& v) { return angle_between(u, v) < tol; });
    if (!known) out.maxima.push_back(u);
  }

  const MatrixXd& z = f.basis();
  out.all_on_basis = !out.maxima.empty();
  for (const VectorXd& u : out.maxima) {
    out.all_on_basis = out.all_on_basis && distance_to_lines(u, z) < tol;
  }
  out.all_basis_hit = true;
  for (Index j = 0; j < m; ++j) {
    for (double s : {1.0, -1.0}) {
      const VectorXd target = s * z.col(j);
      const bool hit = std::any_of(out.maxima.begin(), out.maxima.end(), [&](const VectorXd& u) {
        return angle_between(u, target) < tol;
      });
      out.all_basis_hit = out.all_basis_hit && hit;
    }
  }
  return out;
}

ConvexityCounterexample necessity_counterexample_convexity(const Contrast& g, double lo,
                                                           double hi, int grid) {
  if (!(lo > 0.0) || !(hi > lo) || grid < 3) {
    throw InputError("convexity scan needs 0 < lo < hi and at least 3 grid points");
  }
  std::vector<double> xs(static_cast<std::size_t>(grid));
  std::vector<double> h2(xs.size());
  for (int i = 0; i < grid; ++i) {
    xs[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (grid - 1));
    h2[static_cast<std::size_t>(i)] = contrast_h2(g, xs[static_cast<std::size_t>(i)]);
  }

  ConvexityCounterexample out;
  // Most negative scale-free curvature h''(t) t^2.
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double score = h2[i] * xs[i] * xs[i];
    if (h2[i] < -1e-10 && score < worst) {
      worst = score;
      out.t = xs[i];
      out.violation_found = true;
    }
  }

  std::size_t run_begin = 0, run_len = 0;
  if (!out.violation_found) {
    for (std::size_t i = 0; i < xs.size();) {
      if (std::abs(h2[i]) > 1e-10) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < xs.size() && std::abs(h2[j]) <= 1e-10) ++j;
      if (j - i > run_len) {
        run_begin = i;
        run_len = j - i;
      }
      i = j;
    }
    if (run_len >= 3) {
      out.plateau = true;
      out.t = xs[run_begin + run_len / 2];
    }
  }

  if (!out.violation_found && !out.plateau) {
    out.verdict = "P1 holds on range";
    return out;
  }

  const double a = 1.0 / (2.0 * out.t);
  out.alpha = VectorXd::Constant(2, a);
  out.beta = VectorXd::Constant(2, 1.0 / std::sqrt(a));
  out.point = VectorXd::Constant(2, 1.0 / std::sqrt(2.0));
  const WeightedBasisObjective f(MatrixXd::Identity(2, 2), out.alpha, out.beta, g);
  out.certificate = certify_local_max(f, out.point);

  if (out.violation_found) {
    out.verdict = out.certificate.local_max ? "strict local maximum certified"
                                            : "construction not certified";
    return out;
  }
  // Plateau: H'(x) = h'(2tx) - h'(2t(1-x)) vanishes while both arguments stay inside the run.
  const double left = xs[run_begin];
  const double right = xs[run_begin + run_len - 1];
  const double eps = 0.5 * std::min(out.t - left, right - out.t) / (2.0 * out.t);
  for (int k = -10; k <= 10; ++k) {
    const double x = 0.5 + eps * k / 10.0;
    const double d = contrast_h1(g, 2.0 * out.t * x) - contrast_h1(g, 2.0 * out.t * (1.0 - x));
    out.plateau_derivative_max = std::max(out.plateau_derivative_max, std::abs(d));
  }
  out.verdict = out.plateau_derivative_max <= 1e-8 ? "plateau: H' vanishes near 1/2"
                                                   : "plateau not confirmed";
  return out;
}

P2Counterexample necessity_counterexample_p2(const Contrast& g, Index m) {
  if (m < 2) throw InputError("necessity_counterexample_p2 needs m >= 2");
  const Admissibility adm = check_admissibility(g);
  if (!adm.p1) throw InputError("contrast '" + g.name + "' violates P1; recipe needs P1");
  P2Counterexample out;
  out.slope = adm.slope;
  switch (out.slope.kind) {
    case OriginSlope::kZero:
    case OriginSlope::kNegInfinity:
      throw InputError("contrast '" + g.name + "' satisfies P2; no counterexample exists");
    case OriginSlope::kPosInfinity:
      throw InputError("contrast '" + g.name + "' has h'(0+) = +inf; recipe needs a finite slope");
    case OriginSlope::kAmbiguous:
      throw NumericalError("cannot classify h'(0+) for contrast '" + g.name + "'");
    case OriginSlope::kFinite:
      break;
  }
  const double h0 = out.slope.value;
  if (h0 == 0.0) throw InputError("h'(0+) = 0: P2 holds");
  const MatrixXd z = MatrixXd::Identity(m, m);

  if (h0 > 0.0) {
    for (double b : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}) {
      const double big_m = contrast_h1(g, b * b);
      if (!(big_m > h0) || !std::isfinite(big_m)) continue;
      VectorXd alpha = VectorXd::Ones(m);
      alpha(0) = h0 / big_m;
      out.alpha = alpha;
      out.beta = VectorXd::Constant(m, b);
      out.constant = big_m;
      certify_not_max(WeightedBasisObjective(z, out.alpha, out.beta, g), out);
      if (out.certified) break;
    }
  } else {
    // delta = largest grid x with h'(y) < h'(0)/2 for every grid y <= x.
    double delta = 0.0;
    for (int k = 0; k <= 900; ++k) {
      const double y = 1e-6 * std::pow(10.0, k / 100.0);
      if (!(contrast_h1(g, y) < h0 / 2.0)) break;
      delta = y;
    }
    if (!(delta > 0.0)) throw NumericalError("no interval with h'(y) < h'(0)/2 near 0");
    out.constant = delta;
    out.alpha = VectorXd::Ones(m);
    out.alpha(0) = 2.0;
    out.beta = VectorXd::Constant(m, std::sqrt(delta / 2.0));
    certify_not_max(WeightedBasisObjective(z, out.alpha, out.beta, g), out);
  }
  out.verdict = out.certified ? "e1 is not a local maximum" : "construction not certified";
  return out;
}

PerturbationReport perturbation_experiment(const SimilarityGraph& g, Index m,
                                           const Contrast& contrast,
                                           const PerturbationConfig& cfg) {
  if (cfg.kind == LaplacianKind::kRandomWalk) {
    throw InputError("perturbation_experiment needs a symmetric Laplacian");
  }
  if (cfg.trials < 0 || !(cfg.noise_scale > 0.0)) {
    throw InputError("perturbation_experiment: bad trial count or noise scale");
  }
  const MatrixXd lap = laplacian(g, cfg.kind);
  const Embedding clean = spectral_embed(lap, m, cfg.kind);
  const double scale = std::max(1.0, lap.cwiseAbs().maxCoeff());
  if (std::abs(clean.eigenvalues(m - 1)) > 1e-8 * scale) {
    throw InputError("perturbation_experiment: graph does not have " + std::to_string(m) +
                     " exact components");
  }
  const double gap = clean.eigengap;

  // Cluster directions: distinct rays among the clean rows.
  MatrixXd z(m, m);
  Index found = 0;
  for (Index i = 0; i < clean.size() && found <= m; ++i) {
    const VectorXd row = clean.points.row(i).transpose();
    if (row.norm() == 0.0) continue;
    bool known = false;
    for (Index j = 0; j < found; ++j) known = known || line_angle(row, z.col(j)) < 1e-6;
    if (known) continue;
    if (found == m) {
      found = m + 1;
      break;
    }
    z.col(found++) = row.normalized();
  }
  if (found != m) {
    throw InputError("perturbation_experiment: clean embedding does not have " +
                     std::to_string(m) + " cluster directions");
  }

  PerturbationReport report;
  report.trials.resize(static_cast<std::size_t>(cfg.trials));
  const Index n = lap.rows();
  parallel_for(report.trials.size(), [&](std::size_t t) {
    PerturbationTrial& trial = report.trials[t];
    Rng rng(derive_seed(cfg.seed, t));
    MatrixXd h(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) h(i, j) = h(j, i) = rng.normal();
    }
    const double target = cfg.noise_scale * gap * (1.0 - rng.uniform());
    h *= target / operator_norm(h);
    trial.h_norm = operator_norm(h);
    trial.eigengap = gap;
    if (!(gap > trial.h_norm)) {
      trial.skipped = true;
      trial.reason = "eigengap does not exceed ||H||";
      return;
    }
    const Embedding pert = spectral_embed(MatrixXd(lap + h), m, cfg.kind);
    trial.deviation = embedding_deviation(clean, pert);
    trial.bound = embedding_perturbation_bound(trial.h_norm, gap);
    if (trial.h_norm > cfg.maxima_scale * gap) return;

    trial.maxima_checked = true;
    const MatrixXd r = procrustes_rotation(clean.points, pert.points);
    const MatrixXd reference = r.transpose() * z;
    EnumerationConfig ecfg;
    ecfg.starts = cfg.starts;
    ecfg.seed = derive_seed(cfg.seed ^ 0x9e3779b9ULL, t);
    ecfg.match_tol = cfg.spurious_threshold;
    const MaximaCertificate cert =
        enumerate_maxima(EmpiricalObjective(contrast, pert.points), reference, ecfg);
    trial.maxima_found = cert.signed_classes;
    trial.spurious = static_cast<int>(cert.spurious.size());
    trial.rejected_far = cert.rejected_far;
    for (double e : cert.angular_errors) {
      trial.localization_radius = std::max(trial.localization_radius, e);
    }
  });

  for (const PerturbationTrial& trial : report.trials) {
    if (trial.skipped) continue;
    report.max_bound_ratio = std::max(report.max_bound_ratio, trial.deviation / trial.bound);
    report.bound_holds = report.bound_holds && trial.deviation <= trial.bound;
    if (!trial.maxima_checked) continue;
    report.total_spurious += trial.spurious;
    report.total_rejected_far += trial.rejected_far;
    const double scale_ratio = std::cbrt(trial.h_norm / gap);
    if (scale_ratio > 0.0) {
      report.max_radius_ratio =
          std::max(report.max_radius_ratio, trial.localization_radius / scale_ratio);
    }
  }
  return report;
}

}  // namespace hbr
