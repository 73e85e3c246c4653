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


#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "hbr/datasets.hpp"
#include "hbr/embedding.hpp"
#include "hbr/error.hpp"
#include "hbr/theory.hpp"

namespace hbr {
namespace {

struct LinearObjective {
  VectorXd c;
  double value(const VectorXd& u) const { return c.dot(u); }
  VectorXd gradient(const VectorXd&) const { return c; }
  MatrixXd hessian(const VectorXd& u) const { return MatrixXd::Zero(u.size(), u.size()); }
};

double max_rel_error(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

TEST(WeightedBasis, Validation) {
  const Contrast c = builtin_contrast("abs");
  EXPECT_THROW(WeightedBasisObjective(MatrixXd::Ones(2, 2), VectorXd::Ones(2), VectorXd::Ones(2), c),
               StructuralError);
  EXPECT_THROW(WeightedBasisObjective(MatrixXd::Identity(2, 2), -VectorXd::Ones(2),
                                      VectorXd::Ones(2), c),
               InputError);
  Rng rng(1);
  const WeightedBasisObjective f = WeightedBasisObjective::random(4, c, rng);
  const MatrixXd& z = f.basis();
  EXPECT_LE((z.transpose() * z - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_GT(f.alpha().minCoeff(), 0.0);
  EXPECT_GT(f.beta().minCoeff(), 0.0);
}

TEST(SimplexProperty, ChangeOfVariables) {
  Rng rng(2);
  for (const std::string name : {"abs", "p", "ht", "sig", "gau"}) {
    const WeightedBasisObjective f = WeightedBasisObjective::random(4, builtin_contrast(name), rng);
    const SimplexObjective h(f);
    for (int i = 0; i < 1000; ++i) {
      const VectorXd u = rng.unit_vector(4);
      const VectorXd t = simplex_point(f, u);
      EXPECT_NEAR(t.sum(), 1.0, 1e-12);
      EXPECT_NEAR(h.value(t), f.value(u), 1e-12 * (1.0 + std::abs(f.value(u)))) << name;
    }
  }
}

TEST(ChartProperty, RoundTrip) {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const Index m = 2 + static_cast<Index>(rng.index(5));
    const SphereChart chart(rng.unit_vector(m));
    VectorXd u = rng.unit_vector(m);
    if (u.dot(chart.base()) < 0.0) u = -u;
    if (u.dot(chart.base()) < 1e-3) continue;
    EXPECT_LE((chart.from_chart(chart.to_chart(u)) - u).cwiseAbs().maxCoeff(), 1e-12);
    const MatrixXd p = chart.tangent();
    EXPECT_LE((p.transpose() * p - MatrixXd::Identity(m - 1, m - 1)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((p.transpose() * chart.base()).cwiseAbs().maxCoeff(), 1e-12);
  }
  const SphereChart chart(VectorXd::Unit(3, 0));
  EXPECT_THROW(chart.to_chart(-VectorXd::Unit(3, 0)), InputError);
}

TEST(ChartDerivatives, LinearAndConstant) {
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const LinearObjective f{rng.gaussian_vector(4)};
    const SphereChart chart(rng.unit_vector(4));
    const ChartDerivatives d = chart_derivatives(chart, f);
    EXPECT_LE((d.gradient - chart.tangent().transpose() * f.c).norm(), 1e-12);
    const MatrixXd expected = -f.c.dot(chart.base()) * MatrixXd::Identity(3, 3);
    EXPECT_LE((d.hessian - expected).cwiseAbs().maxCoeff(), 1e-12);
    const ChartDerivatives fd = chart_derivatives_fd(chart, f);
    EXPECT_LE(max_rel_error(fd.gradient, d.gradient), 1e-7);
    EXPECT_LE(max_rel_error(fd.hessian, d.hessian), 1e-5);
  }
  const ChartDerivatives zero = chart_derivatives(SphereChart(VectorXd::Unit(3, 2)),
                                                  LinearObjective{VectorXd::Zero(3)});
  EXPECT_EQ(zero.gradient.norm(), 0.0);
  EXPECT_EQ(zero.hessian.norm(), 0.0);
}

TEST(ChartDerivativesProperty, MatchFiniteDifferences) {
  Rng rng(5);
  const std::vector<std::string> smooth{"p", "ht", "gau"};
  for (int i = 0; i < 100; ++i) {
    const Index m = 2 + static_cast<Index>(rng.index(4));
    const WeightedBasisObjective f = WeightedBasisObjective::random(
        m, builtin_contrast(smooth[static_cast<std::size_t>(i) % 3]), rng);
    const SphereChart chart(rng.unit_vector(m));
    const ChartDerivatives d = chart_derivatives(chart, f);
    const ChartDerivatives fd = chart_derivatives_fd(chart, f);
    EXPECT_LE(max_rel_error(fd.gradient, d.gradient), 1e-5) << i;
    EXPECT_LE(max_rel_error(fd.hessian, d.hessian), 1e-5) << i;
  }
}

TEST(Certify, BasisMaximaAndSaddles) {
  const WeightedBasisObjective f(MatrixXd::Identity(3, 3), VectorXd::Ones(3), VectorXd::Ones(3),
                                 builtin_contrast("p"));
  const PointCertificate at_basis = certify_local_max(f, VectorXd::Unit(3, 1));
  EXPECT_TRUE(at_basis.local_max);
  EXPECT_LE(at_basis.chart_hessian_max, 1e-6);
  EXPECT_FALSE(certify_local_max(f, VectorXd::Ones(3).normalized()).local_max);
  VectorXd edge(3);
  edge << 1, 1, 0;
  EXPECT_FALSE(certify_local_max(f, edge.normalized()).local_max);
  const WeightedBasisObjective kinked(MatrixXd::Identity(3, 3), VectorXd::Ones(3),
                                      VectorXd::Ones(3), builtin_contrast("abs"));
  const PointCertificate k = certify_local_max(kinked, VectorXd::Unit(3, 0));
  EXPECT_TRUE(k.local_max);
  EXPECT_TRUE(k.kink);
  EXPECT_FALSE(certify_local_max(kinked, edge.normalized()).local_max);
}

TEST(Enumerate, RandomObjectivesHaveOnlyBasisMaxima) {
  for (const std::string name : {"abs", "p", "sig"}) {
    for (Index m : {2, 3, 4}) {
      Rng rng(derive_seed(77, static_cast<std::uint64_t>(m)));
      const WeightedBasisObjective f = WeightedBasisObjective::random(m, builtin_contrast(name), rng);
      EnumerationConfig cfg;
      cfg.seed = 8;
      const MaximaCertificate c = enumerate_maxima(f, cfg);
      EXPECT_TRUE(c.complete()) << name << " m=" << m;
      EXPECT_EQ(c.signed_classes, 2 * m) << name << " m=" << m;
      EXPECT_EQ(c.lines, m);
      EXPECT_GE(c.starts, 50 * m);
      for (const VectorXd& u : c.found_maxima) {
        const SphereChart chart(u);
        const ChartDerivatives d = chart_derivatives(chart, f);
        if (!f.near_kink(u, 1e-6)) {
          EXPECT_LT(d.gradient.norm(), 1e-6);
          Eigen::SelfAdjointEigenSolver<MatrixXd> es(d.hessian);
          EXPECT_LE(es.eigenvalues().maxCoeff(), 1e-6);
        }
        const VectorXd t = simplex_point(f, u);
        EXPECT_NEAR(t.maxCoeff(), 1.0, 1e-6);
      }
    }
  }
}

TEST(Enumerate, SpectralWeightsNeedOnlyConvexity) {
  for (const std::string name : {"ht", "gau"}) {
    ASSERT_FALSE(builtin_contrast(name).p2);
    Rng rng(9);
    MatrixXd g(3, 3);
    for (Index i = 0; i < 9; ++i) g.data()[i] = rng.normal();
    const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(g).householderQ();
    VectorXd w(3);
    w << 0.2, 0.3, 0.5;
    const WeightedBasisObjective f = WeightedBasisObjective::spectral(q, w, builtin_contrast(name));
    EnumerationConfig cfg;
    cfg.seed = 4;
    const MaximaCertificate c = enumerate_maxima(f, cfg);
    EXPECT_TRUE(c.complete()) << name;
    EXPECT_EQ(c.signed_classes, 6) << name;
  }
}

TEST(Enumerate, QuadraticLandscapeIsFlat) {
  const VectorXd w = (VectorXd(3) << 0.2, 0.3, 0.5).finished();
  const WeightedBasisObjective f =
      WeightedBasisObjective::spectral(MatrixXd::Identity(3, 3), w, power_contrast(2.0));
  const MaximaCertificate c = enumerate_maxima(f, {});
  EXPECT_TRUE(c.flat_landscape);
  EXPECT_TRUE(c.found_maxima.empty());
}

TEST(Enumerate, OneDimension) {
  const WeightedBasisObjective f(MatrixXd::Identity(1, 1), VectorXd::Ones(1), VectorXd::Ones(1),
                                 builtin_contrast("sig"));
  const MaximaCertificate c = enumerate_maxima(f, {});
  EXPECT_EQ(c.signed_classes, 2);
  EXPECT_EQ(c.lines, 1);
}

TEST(Enumerate, EmpiricalCleanEmbedding) {
  const LabeledGraph lg = gen_blocks({6, 10, 14}, 3);
  const Embedding x = spectral_embed(lg.graph, LaplacianKind::kUnnormalized, 3);
  MatrixXd z(3, 3);
  z << x.points.row(0).normalized().transpose(), x.points.row(6).normalized().transpose(),
      x.points.row(16).normalized().transpose();
  const EmpiricalObjective f(builtin_contrast("sig"), x.points);
  EnumerationConfig cfg;
  cfg.seed = 2;
  const MaximaCertificate c = enumerate_maxima(f, z, cfg);
  EXPECT_TRUE(c.complete());
  EXPECT_EQ(c.signed_classes, 6);
}

TEST(GridOracle, AgreesWithBasis) {
  Rng rng(12);
  const WeightedBasisObjective f = WeightedBasisObjective::random(3, builtin_contrast("abs"), rng);
  const GridOracleResult g = dense_grid_maxima(f, 20000);
  EXPECT_TRUE(g.ok());
  EXPECT_EQ(g.maxima.size(), 6u);
  EXPECT_THROW(dense_grid_maxima(WeightedBasisObjective::random(4, builtin_contrast("abs"), rng)),
               InputError);
}

TEST(Necessity, SquareRootViolatesConvexity) {
  const Contrast sqrt_g = make_contrast(
      "sqrt", [](double t) { return std::sqrt(t); }, [](double t) { return 0.5 / std::sqrt(t); },
      [](double t) { return -0.25 / std::pow(t, 1.5); },
      [](double t) { return 0.375 / std::pow(t, 2.5); });
  const ConvexityCounterexample cx = necessity_counterexample_convexity(sqrt_g);
  ASSERT_TRUE(cx.violation_found);
  EXPECT_NEAR(cx.alpha(0), 1.0 / (2.0 * cx.t), 1e-12);
  EXPECT_NEAR(cx.alpha(1), cx.alpha(0), 1e-12);
  EXPECT_NEAR(cx.beta(0), 1.0 / std::sqrt(cx.alpha(0)), 1e-12);
  EXPECT_NEAR(cx.point(0), std::numbers::sqrt2 / 2.0, 1e-12);
  EXPECT_NEAR(cx.point(1), std::numbers::sqrt2 / 2.0, 1e-12);
  EXPECT_TRUE(cx.certificate.local_max);
}

TEST(Necessity, ConvexContrastHasNoViolation) {
  EXPECT_FALSE(necessity_counterexample_convexity(builtin_contrast("p")).violation_found);
}

TEST(Necessity, AffinePlateau) {
  const ConvexityCounterexample cx = necessity_counterexample_convexity(power_contrast(2.0));
  EXPECT_FALSE(cx.violation_found);
  EXPECT_TRUE(cx.plateau);
  EXPECT_LE(cx.plateau_derivative_max, 1e-8);
}

TEST(Necessity, OriginSlopeCounterexamples) {
  const P2Counterexample up = necessity_counterexample_p2(polynomial_contrast({0, 0, 1, 0, 1}));
  EXPECT_EQ(up.slope.kind, OriginSlope::kFinite);
  EXPECT_GT(up.slope.value, 0.0);
  EXPECT_TRUE(up.certified);
  EXPECT_GT(up.improvement, 0.0);
  const P2Counterexample down = necessity_counterexample_p2(polynomial_contrast({0, 0, -1, 0, 1}));
  EXPECT_LT(down.slope.value, 0.0);
  EXPECT_TRUE(down.certified);
  EXPECT_EQ(down.alpha(0), 2.0);
  EXPECT_THROW(necessity_counterexample_p2(builtin_contrast("abs")), InputError);
}

TEST(Perturbation, BoundAndNoSpuriousMaxima) {
  const LabeledGraph lg = gen_blocks({12, 16, 20}, 7);
  PerturbationConfig cfg;
  cfg.trials = 8;
  cfg.seed = 3;
  const PerturbationReport r = perturbation_experiment(lg.graph, 3, builtin_contrast("sig"), cfg);
  EXPECT_TRUE(r.bound_holds);
  EXPECT_LE(r.max_bound_ratio, 1.0);
  EXPECT_EQ(r.total_spurious, 0);
  for (const PerturbationTrial& t : r.trials) {
    EXPECT_FALSE(t.skipped) << t.reason;
    EXPECT_LE(t.h_norm, 0.5 * t.eigengap + 1e-12);
  }
}

TEST(Perturbation, RequiresExactComponents) {
  const LabeledGraph lg = gen_blocks({12, 16}, 7);
  EXPECT_THROW(perturbation_experiment(lg.graph, 3, builtin_contrast("sig"), {}), InputError);
}

}  // namespace
}  // namespace hbr
