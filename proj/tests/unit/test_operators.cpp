#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "svfkit/error.hpp"
#include "svfkit/operators.hpp"

using namespace svfkit;

TEST(Kernel, WeightsNormalizedAndNonnegative) {
  const auto t = quadrature_nodes(0.0, 1.0, 256);
  for (const Kernel& k : {Kernel::fejer_like(0), Kernel::fejer_like(8), Kernel::window_average(0.1)}) {
    const auto w = k.weights(0.37, t, 0.0, 1.0);
    double s = 0.0;
    for (double v : w) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_THROW(Kernel::fejer_like(-1), Error);
  EXPECT_THROW(Kernel::window_average(0.0), Error);
}

TEST(Operator, ConstantSvfReproducedForEveryKernel) {
  const Svf C = oracle::load_fixture("constant");
  const AnalysisConfig cfg;
  for (const Kernel& k : {Kernel::fejer_like(4), Kernel::fejer_like(32), Kernel::window_average(0.05)}) {
    const OperatorOutput out = metric_integral_operator(C, k, 0.4, cfg);
    EXPECT_LE(hausdorff(out.set, C.evaluate(0.4), cfg.norm, cfg.tol.sample_eps).value, 1e-12);
    EXPECT_EQ(out.witness.size(), out.points.size());
  }
}

TEST(Operator, SingletonMatchesScalarOperator) {
  const Svf T = oracle::load_fixture("tent_singleton");
  const AnalysisConfig cfg;
  const double x = 0.3;
  const std::size_t n_nodes = 512;
  for (int n : {4, 16}) {
    const OperatorOutput out = metric_integral_operator(T, Kernel::fejer_like(n), x, cfg, n_nodes);
    // Direct scalar evaluation of the same quadrature.
    const auto t = quadrature_nodes(0.0, 1.0, n_nodes);
    double num = 0.0, den = 0.0;
    for (double ti : t) {
      const double u = 2.0 * std::numbers::pi * (ti - x);
      const double s = std::sin(0.5 * u);
      const double k = std::abs(s) < 1e-12 ? n + 1.0
                                           : std::pow(std::sin(0.5 * (n + 1) * u) / s, 2) / (n + 1.0);
      const double f = ti < 0.5 ? 2.0 * ti : 2.0 - 2.0 * ti;
      num += k * f;
      den += k;
    }
    ASSERT_EQ(out.set.point_count(), 1u);
    EXPECT_NEAR(out.set.point_at(0)[0], num / den, 1e-9);
  }
}

TEST(ConvergenceStudy, SingletonDistancesDecrease) {
  const Svf T = oracle::load_fixture("tent_singleton");
  const std::vector<double> orders{4, 8, 16, 32};
  const ConvergenceStudy s = convergence_study(T, 0.3, KernelKind::FejerLike, orders, AnalysisConfig{});
  EXPECT_FALSE(s.target_is_limit_set);
  ASSERT_EQ(s.rows.size(), 4u);
  EXPECT_TRUE(s.monotone);
  EXPECT_LT(s.rows.back().distance, s.rows.front().distance);
}

TEST(ConvergenceStudy, ConstantDistancesZero) {
  const std::vector<double> orders{2, 4};
  const ConvergenceStudy s =
      convergence_study(oracle::load_fixture("constant"), 0.5, KernelKind::FejerLike, orders, AnalysisConfig{});
  for (const auto& r : s.rows) EXPECT_LE(r.distance, 1e-12);
}

TEST(ConvergenceStudy, TildeJumpWindowsApproachLimitSet) {
  const std::vector<double> windows{0.1, 0.05, 0.025, 0.0125};
  const ConvergenceStudy s = convergence_study(oracle::load_fixture("finite_G_tilde"), 0.5,
                                               KernelKind::WindowAverage, windows, AnalysisConfig{});
  EXPECT_TRUE(s.target_is_limit_set);
  EXPECT_TRUE(s.monotone);
  for (const auto& r : s.rows) EXPECT_LE(r.distance, 1e-9);
}

TEST(Operator, OutputPointsAreAveragesAlongOneSelection) {
  const Svf G = oracle::load_fixture("finite_G_tilde");
  AnalysisConfig cfg;
  cfg.keep_chains = true;
  const SelectionFamily fam = selection_family(G, 0.5, cfg);
  const Kernel k = Kernel::window_average(0.2);
  const OperatorOutput out = metric_integral_operator(fam, k, 0.5, cfg, 400);
  const auto t = quadrature_nodes(0.0, 1.0, 400);
  const auto w = k.weights(0.5, t, 0.0, 1.0);
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    const PointPath p = fam.members[out.witness[i]].path();
    Point acc = Point::zero(1);
    for (std::size_t j = 0; j < t.size(); ++j) acc += w[j] * p.eval(t[j]);
    EXPECT_NEAR(acc[0], out.points[i][0], 1e-12);
  }
}
