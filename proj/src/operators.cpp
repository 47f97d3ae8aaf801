#include "svfkit/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "svfkit/error.hpp"
#include "svfkit/limit_analysis.hpp"

namespace svfkit {

const char* to_string(KernelKind kind) noexcept {
  return kind == KernelKind::FejerLike ? "fejer_like" : "window_average";
}

Kernel Kernel::fejer_like(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidInput, "kernel order must be >= 0");
  Kernel k;
  k.kind = KernelKind::FejerLike;
  k.order = n;
  return k;
}

Kernel Kernel::window_average(double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidInput, "window must be positive");
  Kernel k;
  k.kind = KernelKind::WindowAverage;
  k.window = h;
  return k;
}

double Kernel::parameter() const noexcept {
  return kind == KernelKind::FejerLike ? static_cast<double>(order) : window;
}

std::vector<double> Kernel::weights(double x, std::span<const double> nodes, double a,
                                    double b) const {
  std::vector<double> w(nodes.size(), 0.0);
  if (kind == KernelKind::FejerLike) {
    const double m = static_cast<double>(order) + 1.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double u = 2.0 * std::numbers::pi * (nodes[i] - x) / (b - a);
      const double s = std::sin(0.5 * u);
      if (std::abs(s) < 1e-12) {
        w[i] = m;
      } else {
        const double r = std::sin(0.5 * m * u) / s;
        w[i] = r * r / m;
      }
    }
  } else {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (std::abs(nodes[i] - x) <= 0.5 * window) w[i] = 1.0;
    }
  }
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "kernel has no quadrature node in its support");
  }
  for (double& v : w) v /= total;
  return w;
}

std::vector<double> quadrature_nodes(double a, double b, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::InvalidInput, "quadrature needs nodes");
  std::vector<double> t(count);
  const double h = (b - a) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = a + h * (static_cast<double>(i) + 0.5);
  return t;
}

namespace {

// Construction partition of a member refined by the quadrature nodes, with
// the set values at every node. Nodes inside the gap a straddle grid keeps
// around its focus are left out so the anchoring neighbours stay in place.
struct RefinedLevel {
  Partition chi{std::vector<double>{0.0, 1.0}};
  std::vector<CompactSet> sets;
};

RefinedLevel refine(const SelectionGrid& grid, int level, std::span<const double> t) {
  const Partition& base = grid.level(level).chi;
  std::vector<double> extra;
  extra.reserve(t.size());
  double gap_lo = grid.focus(), gap_hi = grid.focus();
  if (grid.excludes_focus()) {
    const std::size_t i = base.locate(grid.focus());
    gap_lo = base[i];
    gap_hi = i + 1 < base.size() ? base[i + 1] : base[i];
  }
  for (double x : t) {
    if (!(x > gap_lo && x < gap_hi)) extra.push_back(x);
  }
  RefinedLevel r;
  r.chi = base.merged(extra);
  r.sets.reserve(r.chi.size());
  for (double x : r.chi.nodes()) r.sets.push_back(grid.svf().evaluate(x));
  return r;
}

}  // namespace

OperatorOutput metric_integral_operator(const SelectionFamily& family, const Kernel& kernel,
                                        double x, const AnalysisConfig& cfg,
                                        std::size_t quadrature) {
  if (family.members.empty()) throw Error(ErrorCode::EmptyFamily, "operator needs selections");
  const Partition& g = family.members.front().eval_grid();
  const std::vector<double> t = quadrature_nodes(g.front(), g.back(), quadrature);
  const std::vector<double> w = kernel.weights(x, t, g.front(), g.back());
  std::map<std::pair<const SelectionGrid*, int>, RefinedLevel> cache;
  OperatorOutput out;
  for (std::size_t m = 0; m < family.members.size(); ++m) {
    const SelectionApprox& s = family.members[m];
    const auto key = std::make_pair(s.grid.get(), s.refinement_level);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, refine(*s.grid, s.refinement_level, t)).first;
    const ChainFunction c = build_anchored_chain(it->second.chi, it->second.sets, s.anchor, cfg);
    Point acc = Point::zero(s.dim);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (w[i] != 0.0) acc += w[i] * c.eval(t[i]);
    }
    out.points.push_back(std::move(acc));
    out.witness.push_back(m);
  }
  out.set = CompactSet::points(out.points, cfg.tol.tie_tol);
  return out;
}

OperatorOutput metric_integral_operator(const Svf& F, const Kernel& kernel, double x,
                                        const AnalysisConfig& cfg, std::size_t quadrature) {
  const SelectionFamily family = selection_family(F, x, cfg);
  return metric_integral_operator(family, kernel, x, cfg, quadrature);
}

ConvergenceStudy convergence_study(const Svf& F, double x, KernelKind kind,
                                   std::span<const double> parameters, const AnalysisConfig& cfg,
                                   std::size_t quadrature) {
  ConvergenceStudy study;
  study.x = x;
  study.kind = kind;
  study.target_is_limit_set =
      std::find(F.breakpoints().begin(), F.breakpoints().end(), x) != F.breakpoints().end();
  SelectionFamily family;
  if (study.target_is_limit_set) {
    LimitSetEstimate af = limit_set_AF(F, x, cfg);
    study.target = af.set;
    family = std::move(af.family);
  } else {
    study.target = F.evaluate(x);
    family = selection_family(F, x, cfg);
  }
  double prev = INFINITY;
  for (double p : parameters) {
    const Kernel k = kind == KernelKind::FejerLike ? Kernel::fejer_like(static_cast<int>(p))
                                                   : Kernel::window_average(p);
    const OperatorOutput out = metric_integral_operator(family, k, x, cfg, quadrature);
    StudyRow row;
    row.parameter = p;
    row.distance = hausdorff(out.set, study.target, cfg.norm, cfg.tol.sample_eps).value;
    row.output_size = out.set.point_count();
    if (row.distance > prev + 1e-12) study.monotone = false;
    prev = row.distance;
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace svfkit
