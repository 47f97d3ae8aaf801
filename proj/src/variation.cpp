#include "svfkit/variation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "svfkit/error.hpp"

namespace svfkit {

namespace {

struct Increments {
  std::vector<double> steps;
  double error_bound = 0.0;
};

Increments haus_increments(const Svf& F, std::span<const double> nodes, NormKind norm,
                           double sample_eps) {
  Increments inc;
  inc.steps.reserve(nodes.size());
  CompactSet prev = F.evaluate(nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    CompactSet cur = F.evaluate(nodes[i]);
    const HausdorffEstimate h = hausdorff(prev, cur, norm, sample_eps);
    inc.steps.push_back(h.value);
    inc.error_bound += h.error_bound;
    prev = std::move(cur);
  }
  return inc;
}

// Interior piece endpoints and declared breakpoints: where jumps may sit.
std::vector<double> jump_candidates(const Svf& F) {
  std::vector<double> out = F.breakpoints();
  for (double e : F.piece_endpoints()) {
    if (e > F.a() && e < F.b()) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> window_nodes(double lo, double hi, bool lo_open, bool hi_open, double span,
                                 const Svf* F, const AnalysisConfig& cfg, double& step) {
  std::vector<double> nodes;
  if (!(hi > lo)) {
    step = 0.0;
    if (!lo_open && !hi_open) nodes.push_back(lo);
    return nodes;
  }
  const auto n = static_cast<std::size_t>(
      std::max(1.0, std::ceil((hi - lo) / cfg.tol.sample_eps - 1e-12)));
  step = (hi - lo) / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    nodes.push_back(i == n ? hi : lo + step * static_cast<double>(i));
  }
  const std::vector<double> deltas = delta_schedule(0.0, span, cfg.delta_count);
  for (double d : deltas) {
    if (d < hi - lo) {
      if (lo_open) nodes.push_back(lo + d);
      if (hi_open) nodes.push_back(hi - d);
    }
  }
  if (F) {
    for (double e : F->piece_endpoints()) {
      if (e > lo && e < hi) {
        nodes.push_back(e);
        for (double d : deltas) {
          if (e - d > lo) nodes.push_back(e - d);
          if (e + d < hi) nodes.push_back(e + d);
          if (d < step * 1e-3) break;
        }
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::erase_if(nodes, [&](double t) { return (lo_open && t == lo) || (hi_open && t == hi); });
  return nodes;
}

template <class V, class Eval, class Dist>
ModulusEstimate modulus_impl(ModulusKind kind, double x, double delta, double a, double b,
                             const Svf* F, const AnalysisConfig& cfg, Eval eval, Dist dist,
                             const std::optional<V>& limit) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidInput, "modulus needs delta > 0");
  if (!(x >= a && x <= b)) throw Error(ErrorCode::OutOfDomain, "modulus point outside domain");
  ModulusEstimate est;
  est.kind = kind;
  est.x_star = x;
  est.delta = delta;
  double lo = x;
  double hi = x;
  bool lo_open = false;
  bool hi_open = false;
  switch (kind) {
    case ModulusKind::Omega:
      lo = std::max(a, x - delta / 2);
      hi = std::min(b, x + delta / 2);
      break;
    case ModulusKind::OmegaMinus:
      lo = std::max(a, x - delta);
      break;
    case ModulusKind::OmegaPlus:
      hi = std::min(b, x + delta);
      break;
    case ModulusKind::QuasiMinus:
      if (x <= a) throw Error(ErrorCode::OutOfDomain, "left quasi-modulus needs x > a");
      lo = std::max(a, x - delta);
      hi_open = true;
      break;
    case ModulusKind::QuasiPlus:
      if (x >= b) throw Error(ErrorCode::OutOfDomain, "right quasi-modulus needs x < b");
      hi = std::min(b, x + delta);
      lo_open = true;
      break;
  }
  const std::vector<double> nodes = window_nodes(lo, hi, lo_open, hi_open, b - a, F, cfg, est.grid_step);
  std::vector<V> values;
  values.reserve(nodes.size());
  for (double t : nodes) values.push_back(eval(t));
  double best = 0.0;
  if (kind == ModulusKind::Omega) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        best = std::max(best, dist(values[i], values[j]));
      }
    }
  } else {
    const V ref = (kind == ModulusKind::OmegaMinus || kind == ModulusKind::OmegaPlus)
                      ? eval(x)
                      : *limit;
    for (const V& v : values) best = std::max(best, dist(ref, v));
  }
  est.value = best;
  return est;
}

double innermost_delta(double delta, const std::vector<double>& deltas) {
  for (auto it = deltas.rbegin(); it != deltas.rend(); ++it) {
    if (*it < delta) return *it;
  }
  return delta / 1024.0;
}

}  // namespace

Partition variation_grid(const Svf& F, int level, const AnalysisConfig& cfg) {
  std::vector<double> extra = F.piece_endpoints();
  const std::vector<double> deltas = delta_schedule(F.a(), F.b(), cfg.delta_count);
  for (double x : jump_candidates(F)) {
    extra.push_back(x);
    for (double p : probe_ladder(x, F.a(), F.b(), deltas)) extra.push_back(p);
  }
  return Partition::dyadic(F.a(), F.b(), level).merged(extra);
}

double variation_on_partition(const Svf& F, const Partition& chi, NormKind norm,
                              double sample_eps) {
  const Increments inc = haus_increments(F, chi.nodes(), norm, sample_eps);
  double total = 0.0;
  for (double s : inc.steps) total += s;
  return total;
}

double path_variation(std::span<const Point> values, NormKind norm) {
  double total = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) total += distance(values[i - 1], values[i], norm);
  return total;
}

double VariationProfile::between(double z, double x) const {
  auto index_of = [&](double t) {
    const auto& n = grid.nodes();
    auto it = std::lower_bound(n.begin(), n.end(), t);
    if (it == n.end()) return n.size() - 1;
    if (it != n.begin() && (t - *(it - 1)) < (*it - t)) --it;
    return static_cast<std::size_t>(it - n.begin());
  };
  return values[index_of(x)] - values[index_of(z)];
}

VariationProfile total_variation(const Svf& F, const AnalysisConfig& cfg) {
  VariationProfile profile;
  int small_steps = 0;
  for (int level = cfg.level_min; level <= cfg.level_max; ++level) {
    Partition grid = variation_grid(F, level, cfg);
    const Increments inc = haus_increments(F, grid.nodes(), cfg.norm, cfg.tol.sample_eps);
    std::vector<double> values(grid.size(), 0.0);
    for (std::size_t i = 0; i < inc.steps.size(); ++i) values[i + 1] = values[i] + inc.steps[i];
    const double total = values.back();
    if (!profile.level_totals.empty()) {
      small_steps = std::abs(total - profile.level_totals.back()) < cfg.tol.conv_tol
                        ? small_steps + 1
                        : 0;
    }
    profile.level_totals.push_back(total);
    profile.levels.push_back(level);
    profile.grid = std::move(grid);
    profile.values = std::move(values);
    profile.total = total;
    profile.error_bound = inc.error_bound;
    if (small_steps >= 2) {
      profile.converged = true;
      break;
    }
  }
  return profile;
}

double variation_between(const Svf& F, double lo, double hi, std::span<const double> extra_nodes,
                         const AnalysisConfig& cfg) {
  lo = std::max(lo, F.a());
  hi = std::min(hi, F.b());
  if (!(hi > lo)) return 0.0;
  const Partition grid = variation_grid(F, std::min(cfg.level_max, 10), cfg);
  std::vector<double> nodes{lo, hi};
  for (double t : grid.nodes()) {
    if (t > lo && t < hi) nodes.push_back(t);
  }
  for (double t : extra_nodes) {
    if (t > lo && t < hi) nodes.push_back(t);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return variation_on_partition(F, Partition(std::move(nodes)), cfg.norm, cfg.tol.sample_eps);
}

OneSidedLimit one_sided_limit(const Svf& F, double xi, Side side, const AnalysisConfig& cfg) {
  const Piece& piece = F.side_piece(xi, side);
  OneSidedLimit lim{piece.value.at(xi - piece.t0), side, true, 0.0, 0.0};
  if (piece.analytic) return lim;

  lim.analytic = false;
  const double sign = side == Side::Left ? -1.0 : 1.0;
  const std::vector<double> deltas = delta_schedule(F.a(), F.b(), cfg.delta_count);
  std::optional<CompactSet> prev;
  int streak = 0;
  double last_t = xi;
  double last_gap = 0.0;
  for (double d : deltas) {
    const double t = xi + sign * d;
    if (t < F.a() || t > F.b()) continue;
    CompactSet cur = F.evaluate(t);
    if (prev) {
      const HausdorffEstimate h = hausdorff(*prev, cur, cfg.norm, cfg.tol.sample_eps);
      last_gap = h.value;
      last_t = t;
      streak = h.value < cfg.tol.conv_tol ? streak + 1 : 0;
      if (streak >= 2) {
        lim.set = std::move(cur);
        lim.gap = h.value;
        lim.error_bound = h.error_bound;
        return lim;
      }
    }
    prev = std::move(cur);
  }
  throw NonConvergenceError(std::string(to_string(side)) + " limit at " + std::to_string(xi) +
                                " shows no Cauchy behaviour on the delta ladder",
                            last_t, last_gap);
}

const char* to_string(ModulusKind kind) noexcept {
  switch (kind) {
    case ModulusKind::Omega:
      return "omega";
    case ModulusKind::OmegaMinus:
      return "omega_minus";
    case ModulusKind::OmegaPlus:
      return "omega_plus";
    case ModulusKind::QuasiMinus:
      return "quasi_minus";
    case ModulusKind::QuasiPlus:
      return "quasi_plus";
  }
  return "?";
}

ModulusEstimate local_modulus(const Svf& F, ModulusKind kind, double x, double delta,
                              const AnalysisConfig& cfg) {
  std::optional<CompactSet> limit;
  if (kind == ModulusKind::QuasiMinus) limit = one_sided_limit(F, x, Side::Left, cfg).set;
  if (kind == ModulusKind::QuasiPlus) limit = one_sided_limit(F, x, Side::Right, cfg).set;
  return modulus_impl<CompactSet>(
      kind, x, delta, F.a(), F.b(), &F, cfg, [&](double t) { return F.evaluate(t); },
      [&](const CompactSet& u, const CompactSet& v) {
        return hausdorff(u, v, cfg.norm, cfg.tol.sample_eps).value;
      },
      limit);
}

ModulusEstimate local_modulus(const PointPath& s, ModulusKind kind, double x, double delta,
                              const AnalysisConfig& cfg, const Point* limit) {
  std::optional<Point> lim;
  if (kind == ModulusKind::QuasiMinus || kind == ModulusKind::QuasiPlus) {
    if (limit) {
      lim = *limit;
    } else {
      const std::vector<double> deltas = delta_schedule(s.a, s.b, cfg.delta_count);
      const double eta = innermost_delta(delta, deltas);
      lim = s.eval(kind == ModulusKind::QuasiMinus ? x - eta : x + eta);
    }
  }
  return modulus_impl<Point>(
      kind, x, delta, s.a, s.b, nullptr, cfg, s.eval,
      [&](const Point& u, const Point& v) { return distance(u, v, cfg.norm); }, lim);
}

ModulusEstimate variation_modulus(const Svf& F, ModulusKind kind, double x, double delta,
                                  const AnalysisConfig& cfg) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidInput, "modulus needs delta > 0");
  const std::vector<double> deltas = delta_schedule(F.a(), F.b(), cfg.delta_count);
  const double eta = innermost_delta(delta, deltas);
  ModulusEstimate est;
  est.kind = kind;
  est.x_star = x;
  est.delta = delta;
  const std::vector<double> none;
  switch (kind) {
    case ModulusKind::Omega:
      est.value = variation_between(F, x - delta / 2, x + delta / 2, none, cfg);
      break;
    case ModulusKind::OmegaMinus:
      est.value = variation_between(F, x - delta, x, none, cfg);
      break;
    case ModulusKind::OmegaPlus:
      est.value = variation_between(F, x, x + delta, none, cfg);
      break;
    case ModulusKind::QuasiMinus:
      est.value = variation_between(F, x - delta, x - eta, none, cfg);
      break;
    case ModulusKind::QuasiPlus:
      est.value = variation_between(F, x + eta, x + delta, none, cfg);
      break;
  }
  est.grid_step = (F.b() - F.a()) / static_cast<double>(std::size_t{1} << std::min(cfg.level_max, 10));
  return est;
}

}  // namespace svfkit
