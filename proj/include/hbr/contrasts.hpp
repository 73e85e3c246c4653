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

#include <functional>
#include <string>
#include <vector>

#include "hbr/linalg.hpp"

namespace hbr {

/// Scalar contrast g on [0, inf) with derivatives in t. Objectives apply it to
/// |<u, x>|; dg(0) is the one-sided derivative.
struct Contrast {
  std::string name;
  std::function<double(double)> g;
  std::function<double(double)> dg;
  std::function<double(double)> d2g;
  std::function<double(double)> d3g;
  /// h(x) = g(sqrt x) strictly convex.
  bool p1 = false;
  /// h'(0+) is 0 or -inf.
  bool p2 = false;

  double operator()(double t) const { return g(t); }
  /// Non-zero one-sided slope at 0, so g(|t|) has a kink at t = 0.
  bool kinked() const;
};

/// abs, p (needs p > 2), ht, sig or gau. Flags are set analytically.
Contrast builtin_contrast(const std::string& name, double p = 3.0);

/// "abs", "p:<value>", "ht", "sig" or "gau".
Contrast parse_contrast(const std::string& spec);

/// g(t) = t^p for any p > 0 (p <= 2 included, unlike the builtin).
Contrast power_contrast(double p);

/// g(t) = sum_k coeffs[k] t^k.
Contrast polynomial_contrast(const std::vector<double>& coeffs);

/// Contrast from user callables; P1/P2 flags come from check_admissibility on
/// the default grid.
Contrast make_contrast(std::string name, std::function<double(double)> g,
                       std::function<double(double)> dg, std::function<double(double)> d2g,
                       std::function<double(double)> d3g);

/// h(x) = g(sqrt x) and its derivatives for x > 0 (x is clamped to 1e-300).
double contrast_h(const Contrast& c, double x);
double contrast_h1(const Contrast& c, double x);
double contrast_h2(const Contrast& c, double x);
double contrast_h3(const Contrast& c, double x);

enum class OriginSlope { kZero, kNegInfinity, kPosInfinity, kFinite, kAmbiguous };

std::string to_string(OriginSlope s);

struct OriginSlopeEstimate {
  OriginSlope kind = OriginSlope::kAmbiguous;
  /// h'(0+) when kind is kFinite (or 0 for kZero).
  double value = 0.0;
  /// Fitted exponent gamma in |q(x)| ~ x^gamma.
  double exponent = 0.0;
  /// q_k = (h(4^-k) - h(0)) / 4^-k for k = 1..20.
  std::vector<double> quotients;
};

/// Classifies h'(0+) from the difference quotients of h at 4^-k.
OriginSlopeEstimate classify_origin_slope(const Contrast& c);

struct Admissibility {
  bool p1 = false;
  bool p2 = false;
  OriginSlopeEstimate slope;
  /// First grid point where strict convexity failed (0 when P1 holds).
  double p1_violation = 0.0;
};

/// Geometric grid on [1e-4, 25].
std::vector<double> default_admissibility_grid();

/// P1 by strict convexity of h on consecutive grid triples; P2 from
/// classify_origin_slope. `grid` must be sorted and positive.
Admissibility check_admissibility(const Contrast& c, const std::vector<double>& grid);
Admissibility check_admissibility(const Contrast& c);

struct RobustnessConstants {
  double c_min = 0.0;
  double c_max = 0.0;
  double d = 0.0;
};

/// c_min, c_max bound |h''| and D bounds |h'''| on [lo, hi] (10^4-point grid,
/// h''' by central differences of h''). Throws NumericalError on a non-finite
/// derivative (naming the point) or when c_min is not positive.
RobustnessConstants estimate_robustness(const Contrast& c, double lo, double hi);

/// F_g(u) = (1/n) sum_i g(|<u, x_i>|) over the rows x_i of `points`.
class EmpiricalObjective {
 public:
  EmpiricalObjective(Contrast contrast, MatrixXd points);

  Index dim() const { return points_.cols(); }
  Index size() const { return points_.rows(); }
  const MatrixXd& points() const { return points_; }
  const Contrast& contrast() const { return contrast_; }

  double value(const VectorXd& u) const;
  /// Rows with an exactly zero projection contribute nothing.
  VectorXd gradient(const VectorXd& u) const;
  /// Ambient Hessian; meaningless at kinks.
  MatrixXd hessian(const VectorXd& u) const;
  /// Some nonzero row has |<u, x_i>| < tol * |x_i| and the contrast is kinked.
  bool near_kink(const VectorXd& u, double tol = 1e-7) const;
  /// Unit normals (columns) of the kinked rows at u; empty for smooth contrasts.
  MatrixXd kink_normals(const VectorXd& u, double tol = 1e-7) const;

 private:
  Contrast contrast_;
  MatrixXd points_;
};

/// Checked evaluation: throws InputError unless u has the objective's
/// dimension and unit norm (1e-8).
double fg_value(const EmpiricalObjective& obj, const VectorXd& u);
VectorXd fg_gradient(const EmpiricalObjective& obj, const VectorXd& u);

}  // namespace hbr
