#include "svfkit/limit_analysis.hpp"

#include <algorithm>
#include <cmath>

#include "svfkit/error.hpp"
#include "svfkit/parallel.hpp"

namespace svfkit {

namespace {

void require_interior(const Svf& F, double xi) {
  if (!(xi > F.a() && xi < F.b())) {
    throw Error(ErrorCode::OutOfDomain, "jump analysis needs a < xi < b");
  }
}

struct Limits {
  OneSidedLimit minus;
  OneSidedLimit plus;
};

Limits both_limits(const Svf& F, double xi, const AnalysisConfig& cfg) {
  require_interior(F, xi);
  return {one_sided_limit(F, xi, Side::Left, cfg), one_sided_limit(F, xi, Side::Right, cfg)};
}

CompactSet average_of_pairs(std::span<const MetricPair> pairs, double tie_tol) {
  std::vector<Point> mids;
  mids.reserve(pairs.size());
  for (const MetricPair& p : pairs) mids.push_back(0.5 * (p.a + p.b));
  return CompactSet::points(mids, tie_tol);
}

}  // namespace

ToleranceBudget make_budget(const AnalysisConfig& cfg, bool has_balls, double limit_gap) {
  ToleranceBudget b;
  b.tie = cfg.tol.tie_tol;
  b.selection = cfg.tol.conv_tol;
  b.sampling = has_balls ? 2.0 * cfg.tol.sample_eps : 0.0;
  b.limit = limit_gap;
  return b;
}

LimitSetEstimate limit_set_AF(const Svf& F, double xi, const AnalysisConfig& cfg) {
  require_interior(F, xi);
  LimitSetEstimate est{CompactSet::point(Point::zero(F.dim())), {}, {}, {}, selection_family(F, xi, cfg), 0, 0.0};
  for (std::size_t i = 0; i < est.family.members.size(); ++i) {
    try {
      OneSidedValues v = selection_one_sided(est.family.members[i], xi, cfg);
      est.max_gap = std::max({est.max_gap, v.gap_minus, v.gap_plus});
      est.midpoints.push_back(0.5 * (v.minus + v.plus));
      est.members.push_back(i);
      est.one_sided.push_back(std::move(v));
    } catch (const NonConvergenceError&) {
      ++est.skipped;
    }
  }
  if (est.midpoints.empty()) {
    throw Error(ErrorCode::EmptyFamily, "no selection has Cauchy one-sided values at xi");
  }
  est.set = CompactSet::points(est.midpoints, cfg.tol.tie_tol);
  return est;
}

CompactSet metric_average(const Svf& F, double xi, const AnalysisConfig& cfg) {
  const Limits lim = both_limits(F, xi, cfg);
  MetricCombinationSpec spec{{0.5, 0.5}, {lim.minus.set, lim.plus.set}};
  return metric_linear_combination(spec, cfg.norm, cfg.tol, cfg.chain_cap);
}

Property1Result property1_check(const Svf& F, double xi, const AnalysisConfig& cfg) {
  const Limits lim = both_limits(F, xi, cfg);
  const CompactSet at = F.evaluate(xi);
  const CompactSet uni = CompactSet::make_union(lim.minus.set, lim.plus.set, cfg.tol.tie_tol);
  const double eps = cfg.tol.sample_eps;
  const DistanceEstimate over = excess(at, uni, cfg.norm, eps);
  const DistanceEstimate under = excess(uni, at, cfg.norm, eps);
  Property1Result r;
  r.defect = std::max(over.value, under.value);
  r.error_bound =
      std::max(over.value + over.error_bound, under.value + under.error_bound) - r.defect;
  r.witness = over.value >= under.value ? over.witness : under.witness;
  r.minus_excess = excess(lim.minus.set, at, cfg.norm, eps).value;
  r.plus_excess = excess(lim.plus.set, at, cfg.norm, eps).value;
  r.tolerance = cfg.tol.tie_tol + r.error_bound + lim.minus.gap + lim.plus.gap +
                lim.minus.error_bound + lim.plus.error_bound;
  r.pass = r.defect <= r.tolerance;
  return r;
}

Property2Result property2_check(const Svf& F, double xi, const AnalysisConfig& cfg) {
  const Limits lim = both_limits(F, xi, cfg);
  const std::vector<MetricPair> pairs =
      metric_pairs(lim.minus.set, lim.plus.set, cfg.norm, cfg.tol, cfg.chain_cap);

  Property2Result res;
  res.tolerance = cfg.tol.conv_tol;
  for (double d : delta_schedule(F.a(), F.b(), cfg.delta_count)) {
    if (xi - d >= F.a() && xi + d <= F.b()) res.deltas.push_back(d);
  }
  const std::size_t K = res.deltas.size();
  if (K == 0) throw Error(ErrorCode::InvalidInput, "no delta of the ladder fits inside the domain");

  // Per delta: the nearby sets and, when small and finite, their pair list.
  struct Rung {
    CompactSet L;
    CompactSet R;
    std::optional<std::vector<MetricPair>> pairs;
  };
  std::vector<Rung> rungs;
  rungs.reserve(K);
  for (double d : res.deltas) {
    Rung r{F.evaluate(xi - d), F.evaluate(xi + d), std::nullopt};
    if (r.L.is_finite() && r.R.is_finite() &&
        r.L.point_count() * r.R.point_count() <= kPairEnumerationLimit) {
      r.pairs = metric_pairs(r.L, r.R, cfg.norm, cfg.tol, cfg.chain_cap);
    }
    rungs.push_back(std::move(r));
  }

  res.pairs.resize(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    PairResidual pr;
    pr.pair = pairs[i];
    pr.residuals.reserve(K);
    for (const Rung& r : rungs) {
      const PairApproach ap =
          r.pairs ? nearest_in_pairs(pairs[i].a, pairs[i].b, *r.pairs, cfg.norm)
                  : nearest_metric_pair(pairs[i].a, pairs[i].b, r.L, r.R, cfg.norm, cfg.tol, 0);
      pr.exact = pr.exact && ap.exact;
      pr.residuals.push_back(ap.residual);
    }
    const std::size_t tail = K / 2;
    pr.floor = *std::min_element(pr.residuals.begin() + static_cast<std::ptrdiff_t>(tail),
                                 pr.residuals.end());
    for (std::size_t k = tail + 1; k < K; ++k) {
      if (pr.residuals[k] > pr.residuals[k - 1] + cfg.tol.tie_tol) pr.nonincreasing = false;
    }
    pr.pass = pr.floor < res.tolerance && pr.nonincreasing;
    res.pairs[i] = std::move(pr);
  });

  res.pass = true;
  double worst = -1.0;
  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    if (!res.pairs[i].pass) {
      res.pass = false;
      if (res.pairs[i].floor > worst) {
        worst = res.pairs[i].floor;
        res.obstructing = i;
      }
    }
  }
  return res;
}

JumpAnalysis theorem_check(const Svf& F, double xi, const AnalysisConfig& cfg) {
  const Limits lim = both_limits(F, xi, cfg);
  JumpAnalysis ja;
  ja.xi = xi;
  ja.F_minus = lim.minus.set;
  ja.F_plus = lim.plus.set;
  ja.F_at = F.evaluate(xi);
  ja.limits_analytic = lim.minus.analytic && lim.plus.analytic;
  ja.pairs = metric_pairs(ja.F_minus, ja.F_plus, cfg.norm, cfg.tol, cfg.chain_cap);
  ja.metric_avg = average_of_pairs(ja.pairs, cfg.tol.tie_tol);
  ja.A_F = limit_set_AF(F, xi, cfg);
  ja.prop1 = property1_check(F, xi, cfg);
  ja.prop2 = property2_check(F, xi, cfg);

  const double eps = cfg.tol.sample_eps;
  const DistanceEstimate a_in = excess(ja.metric_avg, ja.A_F.set, cfg.norm, eps);
  const DistanceEstimate b_in = excess(ja.A_F.set, ja.metric_avg, cfg.norm, eps);
  ja.avg_in_AF = {a_in.value, a_in.witness};
  ja.AF_in_avg = {b_in.value, b_in.witness};
  ja.haus_AF_avg = std::max(a_in.value, b_in.value);
  ja.theorem_gap = ja.haus_AF_avg + ja.prop1.minus_excess + ja.prop1.plus_excess;

  const bool balls = !ja.F_minus.is_finite() || !ja.F_plus.is_finite() || !ja.F_at.is_finite();
  const double limit_gap = lim.minus.gap + lim.plus.gap + ja.A_F.max_gap;
  ja.budget = make_budget(cfg, balls, limit_gap);
  ja.gap_within_budget = ja.theorem_gap <= ja.budget.total();
  return ja;
}

}  // namespace svfkit
