#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "svfkit/config.hpp"
#include "svfkit/geometry.hpp"
#include "svfkit/metric_algebra.hpp"
#include "svfkit/selections.hpp"
#include "svfkit/svf.hpp"

namespace svfkit {

// Additive tolerance budget of a jump analysis.
struct ToleranceBudget {
  double tie = 0.0;        // projection tie slack
  double selection = 0.0;  // Cauchy threshold of the selection construction
  double sampling = 0.0;   // 2 * sample_eps whenever ball sets are discretized
  double limit = 0.0;      // one-sided limit and selection extrapolation gaps

  double total() const noexcept { return tie + selection + sampling + limit; }
};

ToleranceBudget make_budget(const AnalysisConfig& cfg, bool has_balls, double limit_gap);

struct LimitSetEstimate {
  CompactSet set = CompactSet::point(Point{0.0});  // deduplicated midpoints
  std::vector<Point> midpoints;      // one per used member, in member order
  std::vector<std::size_t> members;  // family index behind each midpoint
  std::vector<OneSidedValues> one_sided;
  SelectionFamily family;
  std::size_t skipped = 0;  // members without Cauchy one-sided values
  double max_gap = 0.0;     // largest one-sided extrapolation step
};

// { (s(xi-) + s(xi+)) / 2 : s in the selection family }. Throws EmptyFamily
// when no member yields one-sided values.
LimitSetEstimate limit_set_AF(const Svf& F, double xi, const AnalysisConfig& cfg);

// 1/2 F(xi-) (+) 1/2 F(xi+) as a metric linear combination.
CompactSet metric_average(const Svf& F, double xi, const AnalysisConfig& cfg);

struct Property1Result {
  bool pass = false;
  double defect = 0.0;        // haus(F(xi), F(xi-) u F(xi+))
  double error_bound = 0.0;   // sampling error of the defect
  double tolerance = 0.0;
  Point witness;              // point of F(xi) farthest from the union
  double minus_excess = 0.0;  // excess of F(xi-) over F(xi)
  double plus_excess = 0.0;   // excess of F(xi+) over F(xi)
};

Property1Result property1_check(const Svf& F, double xi, const AnalysisConfig& cfg);

struct PairResidual {
  MetricPair pair;
  std::vector<double> residuals;  // one per delta_k
  bool exact = true;              // every residual from exhaustive enumeration
  double floor = 0.0;             // min over the tail of the ladder
  bool nonincreasing = true;      // along the tail
  bool pass = false;
};

struct Property2Result {
  bool pass = false;
  double tolerance = 0.0;
  std::vector<double> deltas;
  std::vector<PairResidual> pairs;
  std::optional<std::size_t> obstructing;  // index of the worst failing pair
};

// For each pair (y-, y+) of (F(xi-), F(xi+)) and each delta_k, the distance
// (max product metric) to the nearest pair of (F(xi - delta_k), F(xi + delta_k)).
// A pair passes when the tail floor is below conv_tol and the tail does not
// increase. Residuals against ball sets come from the projection
// constructions and are upper bounds.
Property2Result property2_check(const Svf& F, double xi, const AnalysisConfig& cfg);

struct InclusionDefect {
  double value = 0.0;
  Point witness;
};

struct JumpAnalysis {
  double xi = 0.0;
  CompactSet F_minus = CompactSet::point(Point{0.0});
  CompactSet F_plus = CompactSet::point(Point{0.0});
  CompactSet F_at = CompactSet::point(Point{0.0});
  bool limits_analytic = true;
  std::vector<MetricPair> pairs;
  LimitSetEstimate A_F;
  CompactSet metric_avg = CompactSet::point(Point{0.0});
  Property1Result prop1;
  Property2Result prop2;
  double haus_AF_avg = 0.0;
  InclusionDefect avg_in_AF;  // excess(metric_avg, A_F): failure of avg in A_F
  InclusionDefect AF_in_avg;  // excess(A_F, metric_avg): failure of A_F in avg
  double theorem_gap = 0.0;   // haus(A_F, avg) + excesses of F(xi-), F(xi+) over F(xi)
  ToleranceBudget budget;
  bool gap_within_budget = false;
};

JumpAnalysis theorem_check(const Svf& F, double xi, const AnalysisConfig& cfg);

}  // namespace svfkit
