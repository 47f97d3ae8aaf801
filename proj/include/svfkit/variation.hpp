#pragma once

#include <functional>
#include <span>
#include <vector>

#include "svfkit/config.hpp"
#include "svfkit/geometry.hpp"
#include "svfkit/svf.hpp"

namespace svfkit {

// Dyadic partition of the given level merged with the piece endpoints, the
// declared breakpoints and the delta ladders around each breakpoint.
Partition variation_grid(const Svf& F, int level, const AnalysisConfig& cfg);

// sum_i haus(F(x_i), F(x_{i-1})).
double variation_on_partition(const Svf& F, const Partition& chi, NormKind norm,
                              double sample_eps);

// sum_i |y_i - y_{i-1}|.
double path_variation(std::span<const Point> values, NormKind norm);

struct VariationProfile {
  Partition grid{std::vector<double>{0.0, 1.0}};
  std::vector<double> values;  // v_F at the grid nodes, nondecreasing, values[0] == 0
  double total = 0.0;
  double error_bound = 0.0;  // accumulated Hausdorff sampling error on the grid
  bool converged = false;
  std::vector<double> level_totals;
  std::vector<int> levels;

  // v_F(x) - v_F(z) for grid nodes z <= x (nearest nodes otherwise).
  double between(double z, double x) const;
};

// Nested refinements from cfg.level_min up to cfg.level_max; stops once two
// successive totals differ by less than conv_tol twice in a row. A
// non-converged profile is returned with converged == false.
VariationProfile total_variation(const Svf& F, const AnalysisConfig& cfg);

// Variation of F over the nodes of a fine grid inside [lo, hi], together with
// lo, hi and the extra nodes in range. A lower estimate of V_lo^hi(F).
double variation_between(const Svf& F, double lo, double hi, std::span<const double> extra_nodes,
                         const AnalysisConfig& cfg);

struct OneSidedLimit {
  CompactSet set;
  Side side = Side::Left;
  bool analytic = false;     // taken from the adjacent piece's expression
  double gap = 0.0;          // last Cauchy step of the numeric fallback
  double error_bound = 0.0;  // sampling error of that step
};

// F(xi-) or F(xi+). Analytic pieces give the exact limit; otherwise the
// values F(xi -/+ delta_k) must settle within conv_tol for two consecutive
// steps or NonConvergenceError is thrown.
OneSidedLimit one_sided_limit(const Svf& F, double xi, Side side, const AnalysisConfig& cfg);

enum class ModulusKind { Omega, OmegaMinus, OmegaPlus, QuasiMinus, QuasiPlus };

const char* to_string(ModulusKind kind) noexcept;

struct ModulusEstimate {
  ModulusKind kind = ModulusKind::Omega;
  double x_star = 0.0;
  double delta = 0.0;
  double value = 0.0;
  double grid_step = 0.0;
};

// A single-valued function on [a, b], e.g. a selection.
struct PointPath {
  double a = 0.0;
  double b = 1.0;
  std::function<Point(double)> eval;
};

// Grid supremum of the modulus. Window grids have step <= sample_eps, contain
// the piece endpoints in range and approach open window ends along the delta
// ladder.
ModulusEstimate local_modulus(const Svf& F, ModulusKind kind, double x, double delta,
                              const AnalysisConfig& cfg);

// Same for a path; quasi-moduli use `limit` as s(x -/+) when given, otherwise
// the value at the innermost ladder point.
ModulusEstimate local_modulus(const PointPath& s, ModulusKind kind, double x, double delta,
                              const AnalysisConfig& cfg, const Point* limit = nullptr);

// Moduli of the variation function v_F, from variation_between.
ModulusEstimate variation_modulus(const Svf& F, ModulusKind kind, double x, double delta,
                                  const AnalysisConfig& cfg);

}  // namespace svfkit
