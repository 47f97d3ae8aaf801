#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "svfkit/error.hpp"
#include "svfkit/geometry.hpp"

using namespace svfkit;

namespace {

const double kSqrt2 = std::sqrt(2.0);

CompactSet pts(std::initializer_list<double> xs) {
  std::vector<Point> v;
  for (double x : xs) v.push_back(Point{x});
  return CompactSet::points(v);
}

}  // namespace

TEST(DistancePointSet, OriginToUpperLeftDisc) {
  const CompactSet disc = CompactSet::ball(Point{-2.0, 2.0}, 1.0);
  EXPECT_NEAR(distance_point_set(Point{0.0, 0.0}, disc, NormKind::L2), 2 * kSqrt2 - 1, 1e-12);
  const auto samples = oracle::disc_samples(Point{-2.0, 2.0}, 1.0, 20000, 1);
  EXPECT_NEAR(oracle::brute_distance(Point{0.0, 0.0}, samples, NormKind::L2), 2 * kSqrt2 - 1, 1e-6);
}

TEST(DistancePointSet, MemberAndSymmetricPair) {
  EXPECT_EQ(distance_point_set(Point{3.0}, pts({3.0}), NormKind::L2), 0.0);
  EXPECT_EQ(distance_point_set(Point{0.0}, pts({-1.0, 1.0}), NormKind::L2), 1.0);
}

TEST(DistancePointSet, DimensionMismatchIsInvalidInput) {
  try {
    distance_point_set(Point{0.0, 0.0}, pts({1.0}), NormKind::L2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(ProjectPointSet, OriginOntoDisc) {
  const CompactSet disc = CompactSet::ball(Point{-2.0, 2.0}, 1.0);
  const CompactSet p = project_point_set(Point{0.0, 0.0}, disc, NormKind::L2, ToleranceConfig{});
  ASSERT_EQ(p.point_count(), 1u);
  EXPECT_NEAR(p.point_at(0)[0], -2.0 + kSqrt2 / 2, 1e-12);
  EXPECT_NEAR(p.point_at(0)[1], 2.0 - kSqrt2 / 2, 1e-12);
}

TEST(ProjectPointSet, ExactTieKeepsBoth) {
  const CompactSet p = project_point_set(Point{0.0}, pts({-1.0, 1.0}), NormKind::L2, ToleranceConfig{});
  ASSERT_EQ(p.point_count(), 2u);
  EXPECT_EQ(p.point_at(0), Point{-1.0});
  EXPECT_EQ(p.point_at(1), Point{1.0});
  EXPECT_EQ(canonical_projection(Point{0.0}, pts({-1.0, 1.0}), NormKind::L2, ToleranceConfig{}), Point{-1.0});
}

TEST(ProjectPointSet, MemberProjectsToItself) {
  const CompactSet p = project_point_set(Point{0.25}, pts({-0.25, 0.0, 0.25}), NormKind::L2, ToleranceConfig{});
  ASSERT_EQ(p.point_count(), 1u);
  EXPECT_EQ(p.point_at(0), Point{0.25});
}

TEST(Hausdorff, Examples) {
  const CompactSet a = pts({-0.25, 0.0, 0.25});
  EXPECT_EQ(hausdorff(a, a, NormKind::L2, 0.01).value, 0.0);
  EXPECT_DOUBLE_EQ(hausdorff(a, pts({-1.0, 1.0}), NormKind::L2, 0.01).value, 1.0);
  const CompactSet l = CompactSet::ball(Point{-2.0, 2.0}, 1.0);
  const CompactSet r = CompactSet::ball(Point{2.0, 2.0}, 1.0);
  const HausdorffEstimate h = hausdorff(l, r, NormKind::L2, 0.01);
  EXPECT_NEAR(h.value, 4.0, 2 * 0.01);
  EXPECT_LE(h.error_bound, 2 * 0.01);
  EXPECT_NEAR(oracle::dense_hausdorff_l2(l, r), 4.0, 1e-6);
}

TEST(Hausdorff, DiscUnionAgainstDenseOracle) {
  const CompactSet l = CompactSet::ball(Point{-2.0, 2.0}, 1.0);
  const CompactSet at = CompactSet::make_union(
      std::vector<CompactSet>{l, CompactSet::point(Point{0.0, 0.0}), CompactSet::ball(Point{2.0, 2.0}, 1.0)});
  const double expected = oracle::dense_hausdorff_l2(l, at);
  const HausdorffEstimate h = hausdorff(l, at, NormKind::L2, 0.01);
  EXPECT_NEAR(h.value, 4.0, 1e-9);
  EXPECT_NEAR(h.value, expected, 2 * 0.01);
}

TEST(SetNorm, Examples) {
  EXPECT_EQ(set_norm(pts({0.0}), NormKind::L2), 0.0);
  EXPECT_EQ(set_norm(pts({-1.0, 1.0}), NormKind::L2), 1.0);
  EXPECT_NEAR(set_norm(CompactSet::ball(Point{-2.0, 2.0}, 1.0), NormKind::L2), 2 * kSqrt2 + 1, 1e-12);
}

TEST(SampleToFinite, FiniteSetUnchanged) {
  const CompactSet a = pts({-1.0, 0.5, 2.0});
  EXPECT_TRUE(sample_to_finite(a, 0.1, NormKind::L2).same_description(a));
}

TEST(SampleToFinite, NetBoundVerifiedByRandomProbing) {
  std::mt19937_64 rng(7);
  for (const NormKind norm : {NormKind::L2, NormKind::L1, NormKind::Linf}) {
    const CompactSet u = CompactSet::balls({{Point{0.0, 0.0}, 1.0}, {Point{3.0, 0.5}, 0.5}});
    const CompactSet net = sample_to_finite(u, 0.1, norm);
    ASSERT_TRUE(net.is_finite());
    const auto probes = oracle::random_points(rng, 2, 4000, -1.0, 3.5);
    const auto net_pts = net.finite_points();
    for (const Point& p : probes) {
      if (!u.contains(p, norm, 0.0)) continue;
      EXPECT_LE(oracle::brute_distance(p, net_pts, norm), 0.1 + 1e-12) << to_string(norm);
    }
    for (const Point& q : net_pts) EXPECT_TRUE(u.contains(q, norm, 1e-9));
  }
}

TEST(HausdorffProperty, MetricAxiomsOnRandomFiniteSets) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const auto a = oracle::random_points(rng, d, 1 + trial % 9);
    const auto b = oracle::random_points(rng, d, 1 + (trial * 7) % 11);
    const auto c = oracle::random_points(rng, d, 1 + (trial * 5) % 6);
    const CompactSet A = CompactSet::points(a), B = CompactSet::points(b), C = CompactSet::points(c);
    for (const NormKind n : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
      const double ab = hausdorff(A, B, n, 0.01).value;
      EXPECT_EQ(ab, oracle::brute_hausdorff(a, b, n));
      EXPECT_EQ(ab, hausdorff(B, A, n, 0.01).value);
      EXPECT_LE(ab, hausdorff(A, C, n, 0.01).value + hausdorff(C, B, n, 0.01).value + 1e-12);
      EXPECT_EQ(hausdorff(A, A, n, 0.01).value, 0.0);
    }
  }
}

TEST(HausdorffProperty, NormEquivalenceFactors) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const CompactSet A = CompactSet::points(oracle::random_points(rng, d, 6));
    const CompactSet B = CompactSet::points(oracle::random_points(rng, d, 6));
    const double h1 = hausdorff(A, B, NormKind::L1, 0.01).value;
    const double h2 = hausdorff(A, B, NormKind::L2, 0.01).value;
    const double hi = hausdorff(A, B, NormKind::Linf, 0.01).value;
    const double dd = static_cast<double>(d);
    EXPECT_LE(hi, h2 + 1e-12);
    EXPECT_LE(h2, h1 + 1e-12);
    EXPECT_LE(h1, std::sqrt(dd) * h2 + 1e-12);
    EXPECT_LE(h2, std::sqrt(dd) * hi + 1e-12);
  }
}

TEST(ProjectionProperty, SubsetAndAttainsDistance) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const auto a = oracle::random_lattice_points(rng, d, 1 + trial % 12);
    const CompactSet A = CompactSet::points(a);
    const Point p = oracle::random_lattice_points(rng, d, 1)[0];
    for (const NormKind n : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
      const CompactSet proj = project_point_set(p, A, n, ToleranceConfig{});
      const double m = distance_point_set(p, A, n);
      EXPECT_EQ(m, oracle::brute_distance(p, a, n));
      EXPECT_EQ(proj.point_count(), CompactSet::points(oracle::brute_projection(p, a, n)).point_count());
      for (const Point& q : proj.finite_points()) {
        EXPECT_TRUE(A.contains(q, n, 0.0));
        EXPECT_LE(distance(p, q, n), m + 1e-9);
      }
    }
  }
}

TEST(ProjectionProperty, BallProjectionAttainsDistance) {
  std::mt19937_64 rng(19);
  const CompactSet u = CompactSet::balls({{Point{-2.0, 2.0}, 1.0}, {Point{2.0, 2.0}, 1.0}});
  for (const Point& p : oracle::random_points(rng, 2, 500, -5.0, 5.0)) {
    const CompactSet proj = project_point_set(p, u, NormKind::L2, ToleranceConfig{});
    EXPECT_GE(proj.point_count(), 1u);
    for (const Point& q : proj.finite_points()) {
      EXPECT_TRUE(u.contains(q, NormKind::L2, 1e-9));
      EXPECT_NEAR(distance(p, q, NormKind::L2), oracle::exact_distance_l2(p, u), 1e-9);
    }
  }
}

TEST(SampleProperty, RandomBallUnions) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> rad(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Ball> balls;
    for (const Point& c : oracle::random_points(rng, 2, 1 + trial % 3, -3.0, 3.0)) {
      balls.push_back({c, rad(rng)});
    }
    const CompactSet u = CompactSet::balls(balls);
    const CompactSet net = sample_to_finite(u, 0.05, NormKind::L2);
    for (const Point& q : net.finite_points()) EXPECT_TRUE(u.contains(q, NormKind::L2, 1e-9));
    EXPECT_LE(oracle::dense_excess_l2(u, net, 360, 40), 0.05 + 1e-9);
  }
}

TEST(CompactSet, DeduplicatesWithinTieTolerance) {
  const CompactSet a = CompactSet::points({Point{1.0}, Point{1.0 + 1e-12}, Point{0.0}});
  EXPECT_EQ(a.point_count(), 2u);
  EXPECT_EQ(a.point_at(0), Point{0.0});
}

TEST(CompactSet, EmptyDescriptionRejected) {
  EXPECT_THROW(CompactSet::points({}), Error);
  EXPECT_THROW(CompactSet::ball(Point{0.0}, -1.0), Error);
}

TEST(ToleranceConfig, Validation) {
  ToleranceConfig t;
  EXPECT_NO_THROW(t.validate());
  t.tie_tol = 0.5;
  EXPECT_THROW(t.validate(), Error);
}
