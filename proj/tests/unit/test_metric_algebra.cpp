#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "svfkit/error.hpp"
#include "svfkit/metric_algebra.hpp"

using namespace svfkit;

namespace {

CompactSet pts(std::initializer_list<double> xs) {
  std::vector<Point> v;
  for (double x : xs) v.push_back(Point{x});
  return CompactSet::points(v);
}

std::vector<std::pair<Point, Point>> as_pairs(const std::vector<MetricPair>& ps) {
  std::vector<std::pair<Point, Point>> out;
  for (const auto& p : ps) out.push_back({p.a, p.b});
  return out;
}

std::vector<Point> sorted_points(const CompactSet& s) { return s.finite_points(); }

const ToleranceConfig kTol{};

}  // namespace

TEST(MetricPairs, TieBothDirections) {
  const auto ps = metric_pairs(pts({0.0}), pts({-1.0, 1.0}), NormKind::L2, kTol);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[0].a, Point{0.0});
  EXPECT_EQ(ps[0].b, Point{-1.0});
  EXPECT_EQ(ps[1].b, Point{1.0});
}

TEST(MetricPairs, JumpOfTheCounterexampleFamily) {
  const auto ps = metric_pairs(pts({-0.25, 0.0, 0.25}), pts({-1.0, 1.0}), NormKind::L2, kTol);
  const std::vector<std::pair<Point, Point>> expected = {
      {Point{-0.25}, Point{-1.0}}, {Point{0.0}, Point{-1.0}}, {Point{0.0}, Point{1.0}}, {Point{0.25}, Point{1.0}}};
  EXPECT_EQ(as_pairs(ps), expected);
  EXPECT_EQ(ps[0].witness, PairWitness::Both);
  EXPECT_EQ(ps[1].witness, PairWitness::BProjectsA);
}

TEST(MetricPairs, CapExceededReportsPartialCount) {
  std::vector<Point> many;
  for (int i = 0; i < 50; ++i) many.push_back(Point{static_cast<double>(i)});
  try {
    metric_pairs(CompactSet::points(many), CompactSet::points(many), NormKind::L2, kTol, 10);
    FAIL() << "expected a cap error";
  } catch (const CapExceededError& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
    EXPECT_EQ(e.cap(), 10u);
    EXPECT_GT(e.produced(), 10u);
  }
}

TEST(MetricPairs, BallPairsAreExactProjections) {
  const CompactSet l = CompactSet::ball(Point{-2.0, 2.0}, 1.0);
  const CompactSet r = CompactSet::ball(Point{2.0, 2.0}, 1.0);
  ToleranceConfig tol;
  tol.sample_eps = 0.1;
  const auto ps = metric_pairs(l, r, NormKind::L2, tol);
  EXPECT_GT(ps.size(), 100u);
  for (const auto& p : ps) {
    EXPECT_TRUE(is_metric_pair(p.a, p.b, l, r, NormKind::L2, 1e-9));
  }
}

TEST(HausdorffViaPairs, Examples) {
  const CompactSet a = pts({-0.25, 0.0, 0.25});
  EXPECT_EQ(hausdorff_via_pairs(a, a, NormKind::L2, kTol), 0.0);
  EXPECT_EQ(hausdorff_via_pairs(a, pts({-1.0, 1.0}), NormKind::L2, kTol), 1.0);
}

TEST(HausdorffViaPairs, RandomPairsMatchBruteForceExactly) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const auto a = oracle::random_points(rng, d, 1 + trial % 12);
    const auto b = oracle::random_points(rng, d, 1 + (trial * 5) % 12);
    for (const NormKind n : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
      const double h = oracle::brute_hausdorff(a, b, n);
      EXPECT_EQ(hausdorff_via_pairs(CompactSet::points(a), CompactSet::points(b), n, kTol), h);
    }
  }
}

TEST(MetricPairsProperty, MatchBruteForceAndTranspose) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const auto a = oracle::random_lattice_points(rng, d, 1 + trial % 7);
    const auto b = oracle::random_lattice_points(rng, d, 1 + (trial * 3) % 7);
    const CompactSet A = CompactSet::points(a), B = CompactSet::points(b);
    const auto ab = metric_pairs(A, B, NormKind::L2, kTol);
    EXPECT_EQ(as_pairs(ab),
              oracle::brute_pairs(A.finite_points(), B.finite_points(), NormKind::L2));
    auto ba = as_pairs(metric_pairs(B, A, NormKind::L2, kTol));
    for (auto& p : ba) std::swap(p.first, p.second);
    std::sort(ba.begin(), ba.end());
    EXPECT_EQ(as_pairs(ab), ba);
  }
}

TEST(MetricPairsProperty, SubsetLemma) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = oracle::random_lattice_points(rng, 2, 2 + trial % 6);
    const auto b = oracle::random_lattice_points(rng, 2, 1 + trial % 5);
    const CompactSet A = CompactSet::points(a), B = CompactSet::points(b);
    for (const auto& p : metric_pairs(A, B, NormKind::L2, kTol)) {
      std::vector<Point> sub{p.a};
      for (const Point& q : A.finite_points()) {
        if (q != p.a && (static_cast<long>(q[0] + q[1]) + trial) % 2 == 0) sub.push_back(q);
      }
      EXPECT_TRUE(is_metric_pair(p.a, p.b, CompactSet::points(sub), B, NormKind::L2, 1e-9));
    }
  }
}

TEST(MetricPairsProperty, LimitClosureUnderPerturbation) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_points(rng, 2, 1 + trial % 6);
    const auto b = oracle::random_points(rng, 2, 1 + trial % 4);
    const CompactSet A = CompactSet::points(a), B = CompactSet::points(b);
    for (double eps : {1e-6, 1e-8}) {
      auto perturb = [&](const std::vector<Point>& v) {
        std::vector<Point> out;
        for (const Point& p : v) out.push_back(Point{p[0] + eps * jitter(rng), p[1] + eps * jitter(rng)});
        return out;
      };
      const auto an = perturb(a), bn = perturb(b);
      for (const auto& p : metric_pairs(CompactSet::points(an), CompactSet::points(bn), NormKind::L2, kTol)) {
        const PairApproach near = nearest_metric_pair(p.a, p.b, A, B, NormKind::L2, kTol);
        EXPECT_LE(near.residual, 4 * eps) << trial;
      }
    }
  }
}

TEST(ChainThrough, Examples) {
  const std::vector<CompactSet> sets = {pts({-0.25, 0.0, 0.25}), pts({-1.0, 1.0})};
  EXPECT_EQ(chain_through(sets, 0, Point{0.25}, NormKind::L2, kTol).points,
            (std::vector<Point>{Point{0.25}, Point{1.0}}));
  EXPECT_EQ(chain_through(sets, 0, Point{0.0}, NormKind::L2, kTol).points,
            (std::vector<Point>{Point{0.0}, Point{-1.0}}));
  const std::vector<CompactSet> same = {pts({1.0, 2.0}), pts({1.0, 2.0})};
  EXPECT_EQ(chain_through(same, 1, Point{2.0}, NormKind::L2, kTol).points,
            (std::vector<Point>{Point{2.0}, Point{2.0}}));
}

TEST(ChainThrough, AnchorOutsideSetIsInvalidAnchor) {
  const std::vector<CompactSet> sets = {pts({0.0}), pts({1.0})};
  try {
    chain_through(sets, 0, Point{0.5}, NormKind::L2, kTol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidAnchor);
  }
}

TEST(MetricChains, Examples) {
  const CompactSet a = pts({1.0, 2.0, 4.0});
  const auto diag = metric_chains(std::vector<CompactSet>{a, a}, NormKind::L2, kTol);
  ASSERT_EQ(diag.size(), 3u);
  for (const auto& c : diag) EXPECT_EQ(c.points[0], c.points[1]);

  EXPECT_EQ(metric_chains(std::vector<CompactSet>{pts({-0.25, 0.0, 0.25}), pts({-1.0, 1.0})},
                          NormKind::L2, kTol).size(), 4u);

  const auto three = metric_chains(std::vector<CompactSet>{pts({0.0}), pts({-1.0, 1.0}), pts({-2.0, 2.0})},
                                   NormKind::L2, kTol);
  ASSERT_EQ(three.size(), 2u);
  EXPECT_EQ(three[0].points, (std::vector<Point>{Point{0.0}, Point{-1.0}, Point{-2.0}}));
  EXPECT_EQ(three[1].points, (std::vector<Point>{Point{0.0}, Point{1.0}, Point{2.0}}));
}

TEST(MetricChains, CapSignalsTruncation) {
  std::vector<Point> v;
  for (int i = 0; i < 6; ++i) v.push_back(Point{0.0, static_cast<double>(i)});
  // Points on a vertical line are all nearest to a far point on the axis.
  const CompactSet far = CompactSet::point(Point{1e6, 2.5});
  const std::vector<CompactSet> sets = {CompactSet::points(v), far, CompactSet::points(v)};
  const ChainEnumeration e = enumerate_chains(sets, NormKind::L2, kTol, 3);
  EXPECT_TRUE(e.truncated);
  EXPECT_EQ(e.chains.size(), 3u);
  EXPECT_THROW(metric_chains(sets, NormKind::L2, kTol, 3), CapExceededError);
}

TEST(MetricChainsProperty, MatchBruteForce) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<Point>> raw;
    std::vector<CompactSet> sets;
    for (int k = 0; k < 2 + trial % 3; ++k) {
      sets.push_back(CompactSet::points(oracle::random_lattice_points(rng, 1 + trial % 2, 1 + (trial + k) % 4)));
      raw.push_back(sets.back().finite_points());
    }
    std::vector<std::vector<Point>> got;
    for (const auto& c : metric_chains(sets, NormKind::L2, kTol)) got.push_back(c.points);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, oracle::brute_chains(raw, NormKind::L2));
  }
}

TEST(MetricLinearCombination, Examples) {
  const CompactSet a = pts({-0.5, 0.0, 3.0});
  MetricCombinationSpec same{{0.5, 0.5}, {a, a}};
  EXPECT_TRUE(metric_linear_combination(same, NormKind::L2, kTol).same_description(a));

  MetricCombinationSpec jump{{0.5, 0.5}, {pts({-0.25, 0.0, 0.25}), pts({-1.0, 1.0})}};
  EXPECT_EQ(sorted_points(metric_linear_combination(jump, NormKind::L2, kTol)),
            (std::vector<Point>{Point{-0.625}, Point{-0.5}, Point{0.5}, Point{0.625}}));
}

TEST(MetricLinearCombination, OrderDependenceFixture) {
  std::ifstream in(oracle::fixture_path("order_dependence"));
  const auto j = nlohmann::json::parse(in);
  auto sets_of = [](const nlohmann::json& arr) {
    std::vector<CompactSet> out;
    for (const auto& s : arr) {
      std::vector<Point> v;
      for (const auto& p : s) v.emplace_back(p.get<std::vector<double>>());
      out.push_back(CompactSet::points(v));
    }
    return out;
  };
  auto points_of = [](const nlohmann::json& arr) {
    std::vector<Point> v;
    for (const auto& p : arr) v.emplace_back(p.get<std::vector<double>>());
    return v;
  };
  const auto lambdas = j["lambdas"].get<std::vector<double>>();
  const CompactSet fwd = metric_linear_combination({lambdas, sets_of(j["forward"])}, NormKind::L2, kTol);
  const CompactSet swp = metric_linear_combination({lambdas, sets_of(j["swapped"])}, NormKind::L2, kTol);
  const auto ef = points_of(j["forward_result"]);
  const auto es = points_of(j["swapped_result"]);
  ASSERT_EQ(fwd.point_count(), ef.size());
  ASSERT_EQ(swp.point_count(), es.size());
  for (std::size_t i = 0; i < ef.size(); ++i) EXPECT_NEAR(fwd.point_at(i)[0], ef[i][0], 1e-12);
  for (std::size_t i = 0; i < es.size(); ++i) EXPECT_NEAR(swp.point_at(i)[0], es[i][0], 1e-12);
  EXPECT_FALSE(fwd.same_description(swp));
}

TEST(MetricLinearCombinationProperty, TwoSetsCommuteAndSitInsideMinkowski) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<CompactSet> sets;
    std::vector<std::vector<Point>> raw;
    const int n = 2 + trial % 2;
    for (int k = 0; k < n; ++k) {
      sets.push_back(CompactSet::points(oracle::random_lattice_points(rng, 2, 1 + (trial + k) % 5)));
      raw.push_back(sets.back().finite_points());
    }
    std::vector<double> lambdas(static_cast<std::size_t>(n), 1.0 / n);
    const CompactSet m = metric_linear_combination({lambdas, sets}, NormKind::L2, kTol);
    const auto mink = oracle::brute_minkowski(lambdas, raw);
    for (const Point& p : m.finite_points()) {
      EXPECT_LE(oracle::brute_distance(p, mink, NormKind::Linf), 1e-9);
    }
    if (n == 2) {
      std::vector<CompactSet> rev = {sets[1], sets[0]};
      EXPECT_TRUE(metric_linear_combination({lambdas, rev}, NormKind::L2, kTol).same_description(m));
    }
  }
}

TEST(MinkowskiCombination, Examples) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_EQ(sorted_points(minkowski_combination(half, std::vector<CompactSet>{pts({0.0}), pts({-1.0, 1.0})})),
            (std::vector<Point>{Point{-0.5}, Point{0.5}}));
  const CompactSet full =
      minkowski_combination(half, std::vector<CompactSet>{pts({-0.25, 0.0, 0.25}), pts({-1.0, 1.0})});
  EXPECT_EQ(full.point_count(), 6u);
  const std::vector<double> first{1.0, 0.0};
  const CompactSet a = pts({1.0, 2.0});
  EXPECT_TRUE(minkowski_combination(first, std::vector<CompactSet>{a, pts({5.0, 7.0})}).same_description(a));
}

TEST(NearestMetricPair, ExhaustiveAndConstructions) {
  const CompactSet l = pts({-0.25, 0.0, 0.25});
  const CompactSet r = pts({-1.0 + 0.01, 1.0 + 0.01});
  const PairApproach p = nearest_metric_pair(Point{0.0}, Point{1.0}, l, r, NormKind::L2, kTol);
  EXPECT_TRUE(p.exact);
  EXPECT_NEAR(p.residual, 0.25, 1e-12);
  const PairApproach q = nearest_metric_pair(Point{0.0}, Point{1.0}, l, r, NormKind::L2, kTol, 0);
  EXPECT_FALSE(q.exact);
  EXPECT_GE(q.residual, p.residual - 1e-12);
}
