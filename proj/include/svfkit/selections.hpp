#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svfkit/config.hpp"
#include "svfkit/geometry.hpp"
#include "svfkit/svf.hpp"
#include "svfkit/variation.hpp"

namespace svfkit {

// Right-continuous step function: y_i on [x_i, x_{i+1}), y_n at x_n.
class ChainFunction {
 public:
  ChainFunction(Partition chi, std::vector<Point> values);

  const Partition& partition() const noexcept { return chi_; }
  const std::vector<Point>& values() const noexcept { return values_; }
  Point eval(double x) const;
  double variation(NormKind norm) const { return path_variation(values_, norm); }

  // Distance between the requested anchor values and the ones actually used
  // (nonzero only when a straddle pair had to be re-projected).
  double anchor_drift = 0.0;

 private:
  Partition chi_;
  std::vector<Point> values_;
};

Point chain_function_eval(const ChainFunction& c, double x);

enum class AnchorMode { AtNodeOutward, StraddlePair };

const char* to_string(AnchorMode mode) noexcept;

struct Anchor {
  double x_star = 0.0;
  Point y_star;  // AtNodeOutward: the prescribed value at x_star
  AnchorMode mode = AnchorMode::AtNodeOutward;
  Point y_minus;  // StraddlePair: the pair of one-sided limits to reproduce
  Point y_plus;

  static Anchor at_node(double x, Point y);
  static Anchor straddle(double xi, Point y_minus, Point y_plus);
  std::string describe() const;
};

// Chain over chi with the anchor imposed and canonical projections outward.
// AtNodeOutward needs x_star in chi and y_star in F(x_star); StraddlePair
// needs x_star strictly between two nodes of chi, and takes the nodes next
// to it as the straddling neighbours.
ChainFunction build_anchored_chain(const Svf& F, const Partition& chi, const Anchor& anchor,
                                   const AnalysisConfig& cfg);
ChainFunction build_anchored_chain(const Partition& chi, std::span<const CompactSet> sets,
                                   const Anchor& anchor, const AnalysisConfig& cfg);

// Refinement schedule shared by selections focused on one point xi: level k
// is the dyadic partition of level k merged with the piece endpoints, the
// breakpoints, the evaluation grid and the delta ladders around xi and every
// jump candidate. When `exclude_focus` is set, nodes strictly between
// xi - delta_min and xi + delta_min (xi included) are dropped. Set values are
// evaluated lazily per level and cached; safe for concurrent use.
class SelectionGrid {
 public:
  SelectionGrid(const Svf& F, double focus, bool exclude_focus, const AnalysisConfig& cfg);

  const Svf& svf() const noexcept { return *F_; }
  double focus() const noexcept { return focus_; }
  bool excludes_focus() const noexcept { return exclude_focus_; }
  const Partition& eval_grid() const noexcept { return eval_; }
  const std::vector<double>& deltas() const noexcept { return deltas_; }

  struct Level {
    Partition chi;
    std::vector<CompactSet> sets;
    std::vector<std::size_t> eval_slot;  // chi index used for each eval node
  };
  const Level& level(int k) const;

 private:
  const Svf* F_;
  AnalysisConfig cfg_;
  double focus_;
  bool exclude_focus_;
  std::vector<double> deltas_;
  std::vector<double> required_;
  Partition eval_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<Level>> levels_;
};

struct SelectionApprox {
  std::shared_ptr<const SelectionGrid> grid;
  Anchor anchor;
  std::size_t dim = 0;
  std::vector<double> flat_values;  // value per eval-grid node, row-major
  int refinement_level = 0;
  double cauchy_gap = 0.0;
  bool converged = false;
  double anchor_drift = 0.0;
  std::optional<ChainFunction> chain;  // final-level chain when keep_chains is set

  const Partition& eval_grid() const { return grid->eval_grid(); }
  std::size_t size() const noexcept { return dim == 0 ? 0 : flat_values.size() / dim; }
  Point value(std::size_t i) const;
  std::vector<Point> values() const;
  // Value at an eval-grid node (nearest node within 1e-12 relative).
  Point value_at(double x) const;
  // Step extension of the eval-grid values (or the kept chain when present).
  PointPath path() const;
};

// Chain functions over the grid's levels level_min.. until the eval-node values
// move by less than conv_tol twice in a row. Throws NonConvergenceError with
// the oscillating node and its gap when level_max is reached first.
SelectionApprox metric_selection(std::shared_ptr<const SelectionGrid> grid, const Anchor& anchor,
                                 const AnalysisConfig& cfg);
SelectionApprox metric_selection(const Svf& F, const Anchor& anchor, const AnalysisConfig& cfg);

struct OneSidedValues {
  Point minus;
  Point plus;
  double gap_minus = 0.0;
  double gap_plus = 0.0;
};

// s(xi-) and s(xi+) from the eval values at xi -/+ delta_k: the last two
// steps must be below conv_tol, and the limit is extrapolated linearly in
// delta from the two innermost values. At the domain ends the missing side
// repeats the value at xi.
OneSidedValues selection_one_sided(const SelectionApprox& s, double xi, const AnalysisConfig& cfg);

struct FlaggedMember {
  Anchor anchor;
  std::string message;
  double witness_x = 0.0;
  double witness_gap = 0.0;
};

struct SelectionFamily {
  double xi = 0.0;
  std::vector<SelectionApprox> members;  // converged, in anchor order
  std::vector<FlaggedMember> flagged;    // did not converge
  std::size_t anchors_at_xi = 0;
  std::size_t anchors_left = 0;
  std::size_t anchors_right = 0;
  std::size_t anchors_straddle = 0;
  std::size_t pair_count = 0;
};

// Selections anchored at samples of F(xi), F(xi-) and F(xi+) and at every
// metric pair of (F(xi-), F(xi+)). Throws EmptyFamily if none converges.
SelectionFamily selection_family(const Svf& F, double xi, const AnalysisConfig& cfg);

}  // namespace svfkit
