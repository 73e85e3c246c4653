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


#include "hbr/contrasts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "hbr/error.hpp"

namespace hbr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// log cosh t without overflow.
double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

bool Contrast::kinked() const {
  const double slope = dg(0.0);
  return std::isnan(slope) || slope != 0.0;
}

Contrast power_contrast(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw InputError("power contrast needs a finite p > 0, got " + format_double(p));
  }
  Contrast c;
  c.name = "p:" + format_double(p);
  c.g = [p](double t) { return std::pow(t, p); };
  c.dg = [p](double t) { return p * std::pow(t, p - 1.0); };
  c.d2g = [p](double t) { return p * (p - 1.0) * std::pow(t, p - 2.0); };
  c.d3g = [p](double t) { return p * (p - 1.0) * (p - 2.0) * std::pow(t, p - 3.0); };
  const Admissibility a = check_admissibility(c);
  c.p1 = a.p1;
  c.p2 = a.p2;
  return c;
}

Contrast builtin_contrast(const std::string& name, double p) {
  Contrast c;
  c.name = name;
  if (name == "abs") {
    c.g = [](double t) { return -t; };
    c.dg = [](double) { return -1.0; };
    c.d2g = [](double) { return 0.0; };
    c.d3g = [](double) { return 0.0; };
    c.p1 = true;
    c.p2 = true;
  } else if (name == "p") {
    if (!(p > 2.0) || !std::isfinite(p)) {
      throw InputError("contrast p needs p > 2, got " + format_double(p));
    }
    c = power_contrast(p);
    c.p1 = true;
    c.p2 = true;
  } else if (name == "ht") {
    // Negated log cosh: h(x) = -log cosh(sqrt x) is strictly convex.
    c.g = [](double t) { return -log_cosh(t); };
    c.dg = [](double t) { return -std::tanh(t); };
    c.d2g = [](double t) {
      const double th = std::tanh(t);
      return -(1.0 - th * th);
    };
    c.d3g = [](double t) {
      const double th = std::tanh(t);
      return 2.0 * th * (1.0 - th * th);
    };
    c.p1 = true;
    c.p2 = false;
  } else if (name == "sig") {
    c.g = [](double t) { return -logistic(t); };
    c.dg = [](double t) {
      const double s = logistic(t);
      return -s * (1.0 - s);
    };
    c.d2g = [](double t) {
      const double s = logistic(t);
      return -s * (1.0 - s) * (1.0 - 2.0 * s);
    };
    c.d3g = [](double t) {
      const double s = logistic(t);
      return -s * (1.0 - s) * (1.0 - 6.0 * s + 6.0 * s * s);
    };
    c.p1 = true;
    c.p2 = true;
  } else if (name == "gau") {
    c.g = [](double t) { return std::exp(-t * t); };
    c.dg = [](double t) { return -2.0 * t * std::exp(-t * t); };
    c.d2g = [](double t) { return (4.0 * t * t - 2.0) * std::exp(-t * t); };
    c.d3g = [](double t) { return (12.0 * t - 8.0 * t * t * t) * std::exp(-t * t); };
    c.p1 = true;
    c.p2 = false;
  } else {
    throw InputError("unknown contrast '" + name + "' (expected abs, p, ht, sig or gau)");
  }
  return c;
}

Contrast parse_contrast(const std::string& spec) {
  if (spec.rfind("p:", 0) == 0) {
    const std::string value = spec.substr(2);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw InputError("contrast '" + spec + "': cannot parse exponent");
    }
    return builtin_contrast("p", p);
  }
  if (spec == "p") return builtin_contrast("p", 3.0);
  return builtin_contrast(spec);
}

Contrast polynomial_contrast(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw InputError("polynomial contrast needs coefficients");
  auto eval = [coeffs](double t, int order) {
    double sum = 0.0;
    for (std::size_t k = static_cast<std::size_t>(order); k < coeffs.size(); ++k) {
      double falling = 1.0;
      for (int j = 0; j < order; ++j) falling *= static_cast<double>(k) - j;
      sum += coeffs[k] * falling * std::pow(t, static_cast<double>(k) - order);
    }
    return sum;
  };
  std::ostringstream name;
  name << "poly";
  for (double c : coeffs) name << ':' << c;
  return make_contrast(
      name.str(), [eval](double t) { return eval(t, 0); },
      [eval](double t) { return eval(t, 1); }, [eval](double t) { return eval(t, 2); },
      [eval](double t) { return eval(t, 3); });
}

Contrast make_contrast(std::string name, std::function<double(double)> g,
                       std::function<double(double)> dg, std::function<double(double)> d2g,
                       std::function<double(double)> d3g) {
  Contrast c;
  c.name = std::move(name);
  c.g = std::move(g);
  c.dg = std::move(dg);
  c.d2g = std::move(d2g);
  c.d3g = std::move(d3g);
  const Admissibility a = check_admissibility(c);
  c.p1 = a.p1;
  c.p2 = a.p2;
  return c;
}

double contrast_h(const Contrast& c, double x) { return c.g(std::sqrt(std::max(x, 0.0))); }

double contrast_h1(const Contrast& c, double x) {
  const double s = std::sqrt(std::max(x, 1e-300));
  return c.dg(s) / (2.0 * s);
}

double contrast_h2(const Contrast& c, double x) {
  x = std::max(x, 1e-300);
  const double s = std::sqrt(x);
  return (c.d2g(s) - c.dg(s) / s) / (4.0 * x);
}

double contrast_h3(const Contrast& c, double x) {
  x = std::max(x, 1e-300);
  const double s = std::sqrt(x);
  return (c.d3g(s) - 3.0 * c.d2g(s) / s + 3.0 * c.dg(s) / x) / (8.0 * x * s);
}

std::string to_string(OriginSlope s) {
  switch (s) {
    case OriginSlope::kZero: return "zero";
    case OriginSlope::kNegInfinity: return "-inf";
    case OriginSlope::kPosInfinity: return "+inf";
    case OriginSlope::kFinite: return "finite";
    case OriginSlope::kAmbiguous: return "ambiguous";
  }
  return "ambiguous";
}

OriginSlopeEstimate classify_origin_slope(const Contrast& c) {
  OriginSlopeEstimate est;
  const double h0 = c.g(0.0);
  for (int k = 1; k <= 20; ++k) {
    const double x = std::pow(4.0, -k);
    est.quotients.push_back((contrast_h(c, x) - h0) / x);
  }
  const double q10 = est.quotients[9];
  const double q12 = est.quotients[11];
  const double q20 = est.quotients[19];
  if (!std::isfinite(q10) || !std::isfinite(q20)) return est;
  if (q20 == 0.0) {
    est.kind = OriginSlope::kZero;
    est.exponent = kInf;
    return est;
  }
  if (q10 == 0.0) return est;
  est.exponent = std::log(std::abs(q10) / std::abs(q20)) / (10.0 * std::log(4.0));
  if (est.exponent > 0.02) {
    est.kind = OriginSlope::kZero;
  } else if (est.exponent < -0.02) {
    est.kind = q20 < 0.0 ? OriginSlope::kNegInfinity : OriginSlope::kPosInfinity;
    est.value = q20 < 0.0 ? -kInf : kInf;
  } else if (std::abs(q20 - q10) <= 1e-3 * std::max(1.0, std::abs(q12))) {
    est.kind = OriginSlope::kFinite;
    est.value = q12;
    // The analytic limit of g'(s) / (2s) is exact where it agrees with the quotients.
    const double limit = contrast_h1(c, 1e-200);
    if (std::isfinite(limit) && std::abs(limit - q12) <= 1e-3 * std::max(1.0, std::abs(q12))) {
      est.value = limit;
    }
  }
  return est;
}

std::vector<double> default_admissibility_grid() {
  constexpr int kPoints = 200;
  std::vector<double> grid(kPoints);
  const double lo = std::log(1e-4);
  const double hi = std::log(25.0);
  for (int i = 0; i < kPoints; ++i) grid[i] = std::exp(lo + (hi - lo) * i / (kPoints - 1));
  return grid;
}

Admissibility check_admissibility(const Contrast& c, const std::vector<double>& grid) {
  Admissibility out;
  out.p1 = grid.size() >= 3;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double a = grid[i - 1], b = grid[i], d = grid[i + 1];
    const double ha = contrast_h(c, a), hb = contrast_h(c, b), hd = contrast_h(c, d);
    const double chord = ((d - b) * ha + (b - a) * hd) / (d - a);
    const double tol = 1e-13 * (std::abs(ha) + std::abs(hb) + std::abs(hd));
    if (!(chord - hb > tol)) {
      out.p1 = false;
      out.p1_violation = b;
      break;
    }
  }
  out.slope = classify_origin_slope(c);
  out.p2 = out.slope.kind == OriginSlope::kZero || out.slope.kind == OriginSlope::kNegInfinity;
  return out;
}

Admissibility check_admissibility(const Contrast& c) {
  return check_admissibility(c, default_admissibility_grid());
}

RobustnessConstants estimate_robustness(const Contrast& c, double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw InputError("estimate_robustness: need 0 < lo < hi < inf");
  }
  constexpr int kPoints = 10000;
  const double step = (hi - lo) / (kPoints - 1);
  std::vector<double> h2(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double x = lo + step * i;
    h2[i] = contrast_h2(c, x);
    if (!std::isfinite(h2[i])) {
      throw NumericalError("estimate_robustness: h'' is not finite at x = " + format_double(x));
    }
  }
  RobustnessConstants r;
  r.c_min = kInf;
  for (double v : h2) {
    r.c_min = std::min(r.c_min, std::abs(v));
    r.c_max = std::max(r.c_max, std::abs(v));
  }
  for (int i = 1; i + 1 < kPoints; ++i) {
    r.d = std::max(r.d, std::abs(h2[i + 1] - h2[i - 1]) / (2.0 * step));
  }
  if (r.c_min <= 1e-14 * std::max(1.0, r.c_max)) {
    throw NumericalError("contrast '" + c.name + "' is not robust on [" + format_double(lo) +
                         ", " + format_double(hi) + "]: c_min = " + format_double(r.c_min) +
                         ", c_max = " + format_double(r.c_max) + ", D = " + format_double(r.d));
  }
  return r;
}

EmpiricalObjective::EmpiricalObjective(Contrast contrast, MatrixXd points)
    : contrast_(std::move(contrast)), points_(std::move(points)) {
  if (points_.rows() == 0 || points_.cols() == 0) {
    throw InputError("empirical objective needs a nonempty point set");
  }
  if (!points_.allFinite()) throw InputError("empirical objective: non-finite points");
}

double EmpiricalObjective::value(const VectorXd& u) const {
  const VectorXd proj = points_ * u;
  double sum = 0.0;
  for (Index i = 0; i < proj.size(); ++i) sum += contrast_.g(std::abs(proj(i)));
  return sum / static_cast<double>(proj.size());
}

VectorXd EmpiricalObjective::gradient(const VectorXd& u) const {
  const VectorXd proj = points_ * u;
  VectorXd weight(proj.size());
  for (Index i = 0; i < proj.size(); ++i) {
    const double t = proj(i);
    weight(i) = t == 0.0 ? 0.0 : contrast_.dg(std::abs(t)) * (t > 0.0 ? 1.0 : -1.0);
  }
  return points_.transpose() * weight / static_cast<double>(proj.size());
}

MatrixXd EmpiricalObjective::hessian(const VectorXd& u) const {
  const VectorXd proj = points_ * u;
  VectorXd weight(proj.size());
  for (Index i = 0; i < proj.size(); ++i) weight(i) = contrast_.d2g(std::abs(proj(i)));
  return points_.transpose() * weight.asDiagonal() * points_ / static_cast<double>(proj.size());
}

MatrixXd EmpiricalObjective::kink_normals(const VectorXd& u, double tol) const {
  if (!contrast_.kinked()) return MatrixXd(u.size(), 0);
  const VectorXd proj = points_ * u;
  std::vector<Index> rows;
  for (Index i = 0; i < proj.size(); ++i) {
    const double norm = points_.row(i).norm();
    if (norm > 0.0 && std::abs(proj(i)) < tol * norm) rows.push_back(i);
  }
  MatrixXd out(u.size(), static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.col(static_cast<Index>(k)) = points_.row(rows[k]).transpose().normalized();
  }
  return out;
}

bool EmpiricalObjective::near_kink(const VectorXd& u, double tol) const {
  if (!contrast_.kinked()) return false;
  const VectorXd proj = points_ * u;
  for (Index i = 0; i < proj.size(); ++i) {
    const double norm = points_.row(i).norm();
    if (norm > 0.0 && std::abs(proj(i)) < tol * norm) return true;
  }
  return false;
}

namespace {

void check_point(const EmpiricalObjective& obj, const VectorXd& u) {
  if (u.size() != obj.dim()) {
    throw InputError("objective has dimension " + std::to_string(obj.dim()) +
                     ", point has " + std::to_string(u.size()));
  }
  if (std::abs(u.norm() - 1.0) > 1e-8) {
    throw InputError("objective point must have unit norm, got " + format_double(u.norm()));
  }
}

}  // namespace

double fg_value(const EmpiricalObjective& obj, const VectorXd& u) {
  check_point(obj, u);
  return obj.value(u);
}

VectorXd fg_gradient(const EmpiricalObjective& obj, const VectorXd& u) {
  check_point(obj, u);
  return obj.gradient(u);
}

}  // namespace hbr
