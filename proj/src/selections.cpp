#include "svfkit/selections.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "svfkit/error.hpp"
#include "svfkit/metric_algebra.hpp"
#include "svfkit/parallel.hpp"

namespace svfkit {

namespace {

double node_tol(const Partition& chi) { return 1e-12 * std::max(1.0, chi.back() - chi.front()); }

void project_outward(std::vector<Point>& values, std::span<const CompactSet> sets,
                     std::size_t left_start, std::size_t right_start, NormKind norm,
                     const ToleranceConfig& tol) {
  for (std::size_t i = left_start; i > 0; --i) {
    values[i - 1] = canonical_projection(values[i], sets[i - 1], norm, tol);
  }
  for (std::size_t i = right_start; i + 1 < sets.size(); ++i) {
    values[i + 1] = canonical_projection(values[i], sets[i + 1], norm, tol);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ChainFunction

ChainFunction::ChainFunction(Partition chi, std::vector<Point> values)
    : chi_(std::move(chi)), values_(std::move(values)) {
  if (values_.size() != chi_.size()) {
    throw Error(ErrorCode::InvalidInput, "chain function needs one value per partition node");
  }
}

Point ChainFunction::eval(double x) const { return values_[chi_.locate(x)]; }

Point chain_function_eval(const ChainFunction& c, double x) { return c.eval(x); }

const char* to_string(AnchorMode mode) noexcept {
  return mode == AnchorMode::AtNodeOutward ? "at_node_outward" : "straddle_pair";
}

Anchor Anchor::at_node(double x, Point y) {
  Anchor a;
  a.x_star = x;
  a.y_star = std::move(y);
  a.mode = AnchorMode::AtNodeOutward;
  return a;
}

Anchor Anchor::straddle(double xi, Point y_minus, Point y_plus) {
  Anchor a;
  a.x_star = xi;
  a.mode = AnchorMode::StraddlePair;
  a.y_star = 0.5 * (y_minus + y_plus);
  a.y_minus = std::move(y_minus);
  a.y_plus = std::move(y_plus);
  return a;
}

std::string Anchor::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << to_string(mode) << " x=" << x_star;
  if (mode == AnchorMode::AtNodeOutward) {
    os << " y=" << y_star.to_string();
  } else {
    os << " y-=" << y_minus.to_string() << " y+=" << y_plus.to_string();
  }
  return os.str();
}

ChainFunction build_anchored_chain(const Partition& chi, std::span<const CompactSet> sets,
                                   const Anchor& anchor, const AnalysisConfig& cfg) {
  if (sets.size() != chi.size()) {
    throw Error(ErrorCode::InvalidInput, "one set per partition node is required");
  }
  std::vector<Point> values(chi.size());
  double drift = 0.0;
  if (anchor.mode == AnchorMode::AtNodeOutward) {
    const std::size_t j = chi.find(anchor.x_star, node_tol(chi));
    if (j == chi.size()) {
      throw Error(ErrorCode::InvalidAnchor, "anchor x = " + std::to_string(anchor.x_star) +
                                                " is not a partition node");
    }
    if (anchor.y_star.dim() != sets[j].dim() ||
        distance_point_set(anchor.y_star, sets[j], cfg.norm) > cfg.tol.tie_tol) {
      throw Error(ErrorCode::InvalidAnchor,
                  "anchor value " + anchor.y_star.to_string() + " is not in F(x*)");
    }
    values[j] = anchor.y_star;
    project_outward(values, sets, j, j, cfg.norm, cfg.tol);
  } else {
    const double xi = anchor.x_star;
    if (!(xi > chi.front() && xi < chi.back())) {
      throw Error(ErrorCode::InvalidAnchor, "straddle point must be interior to the partition");
    }
    if (chi.find(xi, 0.0) != chi.size()) {
      throw Error(ErrorCode::InvalidAnchor, "straddle point must not be a partition node");
    }
    const std::size_t lo = chi.locate(xi);
    const std::size_t hi = lo + 1;
    PairApproach pick =
        nearest_metric_pair(anchor.y_minus, anchor.y_plus, sets[lo], sets[hi], cfg.norm, cfg.tol);
    drift = pick.residual;
    values[lo] = std::move(pick.pair.a);
    values[hi] = std::move(pick.pair.b);
    project_outward(values, sets, lo, hi, cfg.norm, cfg.tol);
  }
  ChainFunction c(chi, std::move(values));
  c.anchor_drift = drift;
  return c;
}

ChainFunction build_anchored_chain(const Svf& F, const Partition& chi, const Anchor& anchor,
                                   const AnalysisConfig& cfg) {
  if (chi.front() != F.a() || chi.back() != F.b()) {
    throw Error(ErrorCode::InvalidInput, "partition must span the domain of F");
  }
  if (anchor.mode == AnchorMode::StraddlePair) {
    const CompactSet lm = one_sided_limit(F, anchor.x_star, Side::Left, cfg).set;
    const CompactSet lp = one_sided_limit(F, anchor.x_star, Side::Right, cfg).set;
    if (!is_metric_pair(anchor.y_minus, anchor.y_plus, lm, lp, cfg.norm, cfg.tol.tie_tol)) {
      throw Error(ErrorCode::InvalidAnchor, "straddle values are not a metric pair of F(xi-), F(xi+)");
    }
  }
  std::vector<CompactSet> sets;
  sets.reserve(chi.size());
  for (double x : chi.nodes()) sets.push_back(F.evaluate(x));
  return build_anchored_chain(chi, sets, anchor, cfg);
}

// ---------------------------------------------------------------------------
// SelectionGrid

SelectionGrid::SelectionGrid(const Svf& F, double focus, bool exclude_focus,
                             const AnalysisConfig& cfg)
    : F_(&F),
      cfg_(cfg),
      focus_(focus),
      exclude_focus_(exclude_focus),
      deltas_(delta_schedule(F.a(), F.b(), cfg.delta_count)),
      eval_(std::vector<double>{F.a(), F.b()}) {
  if (!(focus >= F.a() && focus <= F.b())) {
    throw Error(ErrorCode::OutOfDomain, "selection focus outside the domain");
  }
  if (exclude_focus && !(focus - deltas_.back() > F.a() && focus + deltas_.back() < F.b())) {
    throw Error(ErrorCode::InvalidInput, "a straddled point must be interior to the domain");
  }
  std::vector<double> req = F.piece_endpoints();
  req.push_back(focus);
  for (double p : probe_ladder(focus, F.a(), F.b(), deltas_)) req.push_back(p);
  for (double x : F.breakpoints()) {
    req.push_back(x);
    for (double p : probe_ladder(x, F.a(), F.b(), deltas_)) req.push_back(p);
  }
  for (double e : F.piece_endpoints()) {
    for (double p : probe_ladder(e, F.a(), F.b(), deltas_)) req.push_back(p);
  }
  required_ = req;
  eval_ = Partition::dyadic(F.a(), F.b(), cfg.level_min).merged(req);
  levels_.resize(static_cast<std::size_t>(cfg.level_max) + 1);
}

const SelectionGrid::Level& SelectionGrid::level(int k) const {
  if (k < 0 || k > cfg_.level_max) throw Error(ErrorCode::InvalidInput, "level out of range");
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = levels_[static_cast<std::size_t>(k)];
  if (!slot) {
    Partition chi = Partition::dyadic(F_->a(), F_->b(), k).merged(eval_.nodes());
    if (exclude_focus_) {
      const double d = deltas_.back();
      chi = chi.without_open(focus_ - d * (1.0 - 1e-9), focus_ + d * (1.0 - 1e-9));
    }
    std::vector<CompactSet> sets;
    sets.reserve(chi.size());
    for (double x : chi.nodes()) sets.push_back(F_->evaluate(x));
    std::vector<std::size_t> slots;
    slots.reserve(eval_.size());
    const double tol = node_tol(chi);
    for (double t : eval_.nodes()) {
      const std::size_t j = chi.find(t, tol);
      slots.push_back(j < chi.size() ? j : chi.locate(t));
    }
    slot = std::make_unique<Level>(Level{std::move(chi), std::move(sets), std::move(slots)});
  }
  return *slot;
}

// ---------------------------------------------------------------------------
// SelectionApprox

Point SelectionApprox::value(std::size_t i) const {
  return Point(std::span<const double>(flat_values.data() + i * dim, dim));
}

std::vector<Point> SelectionApprox::values() const {
  std::vector<Point> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(value(i));
  return out;
}

Point SelectionApprox::value_at(double x) const {
  const Partition& g = eval_grid();
  std::size_t i = g.find(x, node_tol(g));
  if (i == g.size()) i = g.locate(x);
  return value(i);
}

PointPath SelectionApprox::path() const {
  const Partition& g = eval_grid();
  PointPath p;
  p.a = g.front();
  p.b = g.back();
  if (chain) {
    const ChainFunction c = *chain;
    p.eval = [c](double x) { return c.eval(x); };
  } else {
    SelectionApprox copy = *this;
    copy.chain.reset();
    p.eval = [copy](double x) { return copy.value(copy.eval_grid().locate(x)); };
  }
  return p;
}

SelectionApprox metric_selection(std::shared_ptr<const SelectionGrid> grid, const Anchor& anchor,
                                 const AnalysisConfig& cfg) {
  const std::size_t n_eval = grid->eval_grid().size();
  const std::size_t dim = grid->svf().dim();
  std::vector<double> prev;
  int streak = 0;
  double last_move = 0.0;
  double witness_x = anchor.x_star;
  for (int k = cfg.level_min; k <= cfg.level_max; ++k) {
    const SelectionGrid::Level& L = grid->level(k);
    ChainFunction c = build_anchored_chain(L.chi, L.sets, anchor, cfg);
    std::vector<double> flat;
    flat.reserve(n_eval * dim);
    for (std::size_t i = 0; i < n_eval; ++i) {
      const Point& v = c.values()[L.eval_slot[i]];
      flat.insert(flat.end(), v.vec().begin(), v.vec().end());
    }
    if (!prev.empty()) {
      double move = 0.0;
      for (std::size_t i = 0; i < n_eval; ++i) {
        const double d = distance(std::span<const double>(flat.data() + i * dim, dim),
                                  std::span<const double>(prev.data() + i * dim, dim), cfg.norm);
        if (d > move) {
          move = d;
          witness_x = grid->eval_grid()[i];
        }
      }
      last_move = move;
      streak = move < cfg.tol.conv_tol ? streak + 1 : 0;
      if (streak >= 2) {
        SelectionApprox s;
        s.grid = grid;
        s.anchor = anchor;
        s.dim = dim;
        s.flat_values = std::move(flat);
        s.refinement_level = k;
        s.cauchy_gap = move;
        s.converged = true;
        s.anchor_drift = c.anchor_drift;
        if (cfg.keep_chains) s.chain = std::move(c);
        return s;
      }
    }
    prev = std::move(flat);
  }
  throw NonConvergenceError("selection " + anchor.describe() +
                                " did not settle within the refinement schedule",
                            witness_x, last_move);
}

SelectionApprox metric_selection(const Svf& F, const Anchor& anchor, const AnalysisConfig& cfg) {
  auto grid = std::make_shared<const SelectionGrid>(
      F, anchor.x_star, anchor.mode == AnchorMode::StraddlePair, cfg);
  return metric_selection(std::move(grid), anchor, cfg);
}

OneSidedValues selection_one_sided(const SelectionApprox& s, double xi, const AnalysisConfig& cfg) {
  const Partition& g = s.eval_grid();
  const double tol = node_tol(g);
  const std::vector<double>& deltas = s.grid->deltas();
  auto side_limit = [&](double sign, double& gap) -> Point {
    std::vector<std::pair<double, Point>> seq;
    for (double d : deltas) {
      const double t = xi + sign * d;
      if (t < g.front() || t > g.back()) continue;
      const std::size_t i = g.find(t, tol);
      if (i < g.size()) seq.emplace_back(d, s.value(i));
    }
    if (seq.size() < 3) {
      throw Error(ErrorCode::InvalidInput,
                  "the delta ladder around x = " + std::to_string(xi) + " is not on the eval grid");
    }
    const std::size_t K = seq.size() - 1;
    const double d1 = distance(seq[K].second, seq[K - 1].second, cfg.norm);
    const double d2 = distance(seq[K - 1].second, seq[K - 2].second, cfg.norm);
    gap = d1;
    if (!(d1 < cfg.tol.conv_tol && d2 < cfg.tol.conv_tol)) {
      throw NonConvergenceError("selection values near x = " + std::to_string(xi) +
                                    " are not Cauchy on the delta ladder",
                                xi + sign * seq[K].first, std::max(d1, d2));
    }
    const double w = seq[K].first / (seq[K - 1].first - seq[K].first);
    return seq[K].second + w * (seq[K].second - seq[K - 1].second);
  };
  OneSidedValues out;
  const Point at = s.value_at(xi);
  out.minus = xi > g.front() ? side_limit(-1.0, out.gap_minus) : at;
  out.plus = xi < g.back() ? side_limit(1.0, out.gap_plus) : at;
  return out;
}

SelectionFamily selection_family(const Svf& F, double xi, const AnalysisConfig& cfg) {
  if (!(xi >= F.a() && xi <= F.b())) {
    throw Error(ErrorCode::OutOfDomain, "family point outside the domain");
  }
  SelectionFamily fam;
  fam.xi = xi;
  const std::vector<double> deltas = delta_schedule(F.a(), F.b(), cfg.delta_count);
  const double dmin = deltas.back();

  struct Job {
    Anchor anchor;
    std::shared_ptr<const SelectionGrid> grid;
    double drift = 0.0;
  };
  std::vector<Job> jobs;
  auto at_grid = std::make_shared<const SelectionGrid>(F, xi, false, cfg);

  const CompactSet at = sample_to_finite(F.evaluate(xi), cfg.tol.sample_eps, cfg.norm);
  for (const Point& y : at.finite_points()) jobs.push_back({Anchor::at_node(xi, y), at_grid, 0.0});
  fam.anchors_at_xi = jobs.size();

  std::optional<CompactSet> left;
  std::optional<CompactSet> right;
  if (xi - dmin >= F.a() && xi > F.a()) {
    left = one_sided_limit(F, xi, Side::Left, cfg).set;
    const double x = xi - dmin;
    const CompactSet near = F.evaluate(x);
    for (const Point& y : sample_to_finite(*left, cfg.tol.sample_eps, cfg.norm).finite_points()) {
      Point p = canonical_projection(y, near, cfg.norm, cfg.tol);
      const double drift = distance(p, y, cfg.norm);
      jobs.push_back({Anchor::at_node(x, std::move(p)), at_grid, drift});
      ++fam.anchors_left;
    }
  }
  if (xi + dmin <= F.b() && xi < F.b()) {
    right = one_sided_limit(F, xi, Side::Right, cfg).set;
    const double x = xi + dmin;
    const CompactSet near = F.evaluate(x);
    for (const Point& y : sample_to_finite(*right, cfg.tol.sample_eps, cfg.norm).finite_points()) {
      Point p = canonical_projection(y, near, cfg.norm, cfg.tol);
      const double drift = distance(p, y, cfg.norm);
      jobs.push_back({Anchor::at_node(x, std::move(p)), at_grid, drift});
      ++fam.anchors_right;
    }
  }
  if (left && right) {
    auto st_grid = std::make_shared<const SelectionGrid>(F, xi, true, cfg);
    const std::vector<MetricPair> pairs = metric_pairs(*left, *right, cfg.norm, cfg.tol, cfg.chain_cap);
    fam.pair_count = pairs.size();
    for (const MetricPair& p : pairs) jobs.push_back({Anchor::straddle(xi, p.a, p.b), st_grid, 0.0});
    fam.anchors_straddle = pairs.size();
  }

  std::vector<std::optional<SelectionApprox>> built(jobs.size());
  std::vector<std::optional<FlaggedMember>> failed(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    try {
      SelectionApprox s = metric_selection(jobs[i].grid, jobs[i].anchor, cfg);
      s.anchor_drift = std::max(s.anchor_drift, jobs[i].drift);
      built[i] = std::move(s);
    } catch (const NonConvergenceError& e) {
      failed[i] = FlaggedMember{jobs[i].anchor, e.what(), e.witness_x(), e.witness_gap()};
    } catch (const std::exception& e) {
      failed[i] = FlaggedMember{jobs[i].anchor, e.what(), jobs[i].anchor.x_star, 0.0};
    }
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (built[i]) fam.members.push_back(std::move(*built[i]));
    if (failed[i]) fam.flagged.push_back(std::move(*failed[i]));
  }
  if (fam.members.empty()) {
    throw Error(ErrorCode::EmptyFamily, "no selection of the family converged at x = " +
                                            std::to_string(xi) + " (" +
                                            std::to_string(fam.flagged.size()) + " flagged)");
  }
  return fam;
}

}  // namespace svfkit
