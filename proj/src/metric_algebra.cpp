#include "svfkit/metric_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "svfkit/error.hpp"
#include "svfkit/kdtree.hpp"

namespace svfkit {

namespace {

bool pair_less(const MetricPair& x, const MetricPair& y) {
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

bool pair_close(const MetricPair& x, const MetricPair& y, double tol) {
  return distance(x.a, y.a, NormKind::Linf) <= tol && distance(x.b, y.b, NormKind::Linf) <= tol;
}

PairWitness merge_witness(PairWitness x, PairWitness y) {
  return x == y ? x : PairWitness::Both;
}

// Indices of the nearest points of a finite set to p (ties within tie_tol).
void nearest_indices(std::span<const double> p, const CompactSet& s, NormKind norm, double tie_tol,
                     std::vector<std::size_t>& out) {
  out.clear();
  if (const KdTree* tree = s.index()) {
    const double m = tree->nearest(p, norm).distance;
    tree->within(p, m + tie_tol, norm, out);
    std::sort(out.begin(), out.end());
    return;
  }
  double m = INFINITY;
  for (std::size_t i = 0; i < s.point_count(); ++i) {
    m = std::min(m, distance(p, s.point_span(i), norm));
  }
  for (std::size_t i = 0; i < s.point_count(); ++i) {
    if (distance(p, s.point_span(i), norm) <= m + tie_tol) out.push_back(i);
  }
}

void require_same_dim(std::span<const CompactSet> sets) {
  for (const CompactSet& s : sets) {
    if (s.dim() != sets.front().dim()) {
      throw Error(ErrorCode::InvalidInput, "sets of a chain must share one dimension");
    }
  }
}

}  // namespace

const char* to_string(PairWitness w) noexcept {
  switch (w) {
    case PairWitness::BProjectsA:
      return "b_projects_a";
    case PairWitness::AProjectsB:
      return "a_projects_b";
    case PairWitness::Both:
      return "both";
  }
  return "?";
}

bool is_metric_pair(const Point& a, const Point& b, const CompactSet& A, const CompactSet& B,
                    NormKind norm, double tie_tol) {
  if (distance_point_set(a, A, norm) > tie_tol || distance_point_set(b, B, norm) > tie_tol) {
    return false;
  }
  const double ab = distance(a, b, norm);
  return ab <= distance_point_set(a, B, norm) + tie_tol ||
         ab <= distance_point_set(b, A, norm) + tie_tol;
}

std::vector<MetricPair> metric_pairs(const CompactSet& A, const CompactSet& B, NormKind norm,
                                     const ToleranceConfig& cfg, std::size_t cap) {
  if (A.dim() != B.dim()) throw Error(ErrorCode::InvalidInput, "metric_pairs: dimension mismatch");
  const CompactSet As = sample_to_finite(A, cfg.sample_eps, norm);
  const CompactSet Bs = sample_to_finite(B, cfg.sample_eps, norm);

  std::vector<MetricPair> pairs;
  auto push = [&](MetricPair p) {
    pairs.push_back(std::move(p));
    // Raw pairs may contain duplicates from both directions; allow 2x headroom.
    if (pairs.size() > 2 * cap) {
      throw CapExceededError("metric_pairs", cap, pairs.size());
    }
  };
  for (std::size_t i = 0; i < As.point_count(); ++i) {
    const Point a = As.point_at(i);
    for (const Point& b : project_point_set(a, B, norm, cfg).finite_points()) {
      push({a, b, PairWitness::BProjectsA});
    }
  }
  for (std::size_t j = 0; j < Bs.point_count(); ++j) {
    const Point b = Bs.point_at(j);
    for (const Point& a : project_point_set(b, A, norm, cfg).finite_points()) {
      push({a, b, PairWitness::AProjectsB});
    }
  }
  std::sort(pairs.begin(), pairs.end(), pair_less);
  std::vector<MetricPair> merged;
  merged.reserve(pairs.size());
  for (MetricPair& p : pairs) {
    bool absorbed = false;
    for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
      if (it->a[0] < p.a[0] - cfg.tie_tol) break;
      if (pair_close(*it, p, cfg.tie_tol)) {
        it->witness = merge_witness(it->witness, p.witness);
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(std::move(p));
  }
  if (merged.size() > cap) throw CapExceededError("metric_pairs", cap, merged.size());
  return merged;
}

double hausdorff_via_pairs(const CompactSet& A, const CompactSet& B, NormKind norm,
                           const ToleranceConfig& cfg, std::size_t cap) {
  double best = 0.0;
  for (const MetricPair& p : metric_pairs(A, B, norm, cfg, cap)) {
    best = std::max(best, distance(p.a, p.b, norm));
  }
  return best;
}

PairApproach nearest_in_pairs(const Point& y_minus, const Point& y_plus,
                              std::span<const MetricPair> pairs, NormKind norm) {
  PairApproach best;
  best.residual = INFINITY;
  best.exact = true;
  for (const MetricPair& p : pairs) {
    const double r = std::max(distance(p.a, y_minus, norm), distance(p.b, y_plus, norm));
    if (r < best.residual) {
      best.pair = p;
      best.residual = r;
    }
  }
  return best;
}

PairApproach nearest_metric_pair(const Point& y_minus, const Point& y_plus, const CompactSet& L,
                                 const CompactSet& R, NormKind norm, const ToleranceConfig& cfg,
                                 std::size_t enumeration_limit) {
  if (L.is_finite() && R.is_finite() &&
      L.point_count() * R.point_count() <= enumeration_limit) {
    return nearest_in_pairs(y_minus, y_plus, metric_pairs(L, R, norm, cfg), norm);
  }
  PairApproach best;
  best.residual = INFINITY;
  auto consider = [&](Point m, Point p, PairWitness w) {
    const double r = std::max(distance(m, y_minus, norm), distance(p, y_plus, norm));
    if (r < best.residual) best = {MetricPair{std::move(m), std::move(p), w}, r, false};
  };
  {
    Point m = canonical_projection(y_minus, L, norm, cfg);
    Point p = projection_nearest_to(m, R, y_plus, norm, cfg);
    consider(std::move(m), std::move(p), PairWitness::BProjectsA);
  }
  {
    Point p = canonical_projection(y_plus, R, norm, cfg);
    Point m = projection_nearest_to(p, L, y_minus, norm, cfg);
    consider(std::move(m), std::move(p), PairWitness::AProjectsB);
  }
  return best;
}

MetricChain chain_through(std::span<const CompactSet> sets, std::size_t j, const Point& a,
                          NormKind norm, const ToleranceConfig& cfg) {
  if (sets.size() < 2) throw Error(ErrorCode::InvalidInput, "a chain needs at least two sets");
  if (j >= sets.size()) throw Error(ErrorCode::InvalidInput, "chain anchor index out of range");
  require_same_dim(sets);
  if (a.dim() != sets[j].dim() || distance_point_set(a, sets[j], norm) > cfg.tie_tol) {
    throw Error(ErrorCode::InvalidAnchor,
                "anchor " + a.to_string() + " is not in set " + std::to_string(j));
  }
  MetricChain chain;
  chain.points.resize(sets.size());
  chain.points[j] = a;
  for (std::size_t i = j; i > 0; --i) {
    chain.points[i - 1] = canonical_projection(chain.points[i], sets[i - 1], norm, cfg);
  }
  for (std::size_t i = j; i + 1 < sets.size(); ++i) {
    chain.points[i + 1] = canonical_projection(chain.points[i], sets[i + 1], norm, cfg);
  }
  return chain;
}

ChainEnumeration enumerate_chains(std::span<const CompactSet> sets, NormKind norm,
                                  const ToleranceConfig& cfg, std::size_t cap) {
  if (sets.size() < 2) throw Error(ErrorCode::InvalidInput, "a chain needs at least two sets");
  require_same_dim(sets);
  std::vector<CompactSet> finite;
  finite.reserve(sets.size());
  for (const CompactSet& s : sets) finite.push_back(sample_to_finite(s, cfg.sample_eps, norm));

  // next[k][i]: indices in set k+1 paired with point i of set k.
  const std::size_t n = finite.size();
  std::vector<std::vector<std::vector<std::size_t>>> next(n - 1);
  std::vector<std::size_t> scratch;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const CompactSet& cur = finite[k];
    const CompactSet& nxt = finite[k + 1];
    next[k].resize(cur.point_count());
    for (std::size_t i = 0; i < cur.point_count(); ++i) {
      nearest_indices(cur.point_span(i), nxt, norm, cfg.tie_tol, scratch);
      next[k][i] = scratch;
    }
    for (std::size_t j = 0; j < nxt.point_count(); ++j) {
      nearest_indices(nxt.point_span(j), cur, norm, cfg.tie_tol, scratch);
      for (std::size_t i : scratch) next[k][i].push_back(j);
    }
    for (auto& list : next[k]) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }

  ChainEnumeration result;
  std::vector<std::size_t> path(n);
  std::vector<std::size_t> cursor(n, 0);
  for (std::size_t start = 0; start < finite[0].point_count(); ++start) {
    path[0] = start;
    std::size_t depth = 1;
    cursor[1] = 0;
    while (depth > 0) {
      if (depth == n) {
        if (result.chains.size() == cap) {
          result.truncated = true;
          return result;
        }
        MetricChain chain;
        chain.points.reserve(n);
        for (std::size_t k = 0; k < n; ++k) chain.points.push_back(finite[k].point_at(path[k]));
        result.chains.push_back(std::move(chain));
        --depth;
        continue;
      }
      const auto& options = next[depth - 1][path[depth - 1]];
      if (cursor[depth] < options.size()) {
        path[depth] = options[cursor[depth]++];
        ++depth;
        if (depth < n) cursor[depth] = 0;
      } else {
        --depth;
      }
    }
  }
  return result;
}

std::vector<MetricChain> metric_chains(std::span<const CompactSet> sets, NormKind norm,
                                       const ToleranceConfig& cfg, std::size_t cap) {
  ChainEnumeration e = enumerate_chains(sets, norm, cfg, cap);
  if (e.truncated) throw CapExceededError("metric_chains", cap, e.chains.size());
  return std::move(e.chains);
}

CompactSet metric_linear_combination(const MetricCombinationSpec& spec, NormKind norm,
                                     const ToleranceConfig& cfg, std::size_t cap) {
  if (spec.sets.size() < 2 || spec.lambdas.size() != spec.sets.size()) {
    throw Error(ErrorCode::InvalidInput,
                "metric combination needs equally many (>= 2) weights and sets");
  }
  for (double l : spec.lambdas) {
    if (!std::isfinite(l)) throw Error(ErrorCode::InvalidInput, "non-finite weight");
  }
  std::vector<Point> out;
  if (spec.sets.size() == 2) {
    for (const MetricPair& p : metric_pairs(spec.sets[0], spec.sets[1], norm, cfg, cap)) {
      out.push_back(spec.lambdas[0] * p.a + spec.lambdas[1] * p.b);
    }
  } else {
    for (const MetricChain& c : metric_chains(spec.sets, norm, cfg, cap)) {
      Point sum = Point::zero(spec.sets.front().dim());
      for (std::size_t i = 0; i < c.points.size(); ++i) sum += spec.lambdas[i] * c.points[i];
      out.push_back(std::move(sum));
    }
  }
  return CompactSet::points(out, cfg.tie_tol);
}

CompactSet minkowski_combination(std::span<const double> lambdas, std::span<const CompactSet> sets,
                                 std::size_t cap) {
  if (sets.empty() || lambdas.size() != sets.size()) {
    throw Error(ErrorCode::InvalidInput, "Minkowski combination needs one weight per set");
  }
  require_same_dim(sets);
  double total = 1.0;
  for (const CompactSet& s : sets) {
    if (!s.is_finite()) {
      throw Error(ErrorCode::InvalidInput, "Minkowski combination needs finite point sets");
    }
    total *= static_cast<double>(s.point_count());
  }
  if (total > static_cast<double>(cap)) {
    throw CapExceededError("minkowski_combination", cap, 0);
  }
  std::vector<Point> acc{Point::zero(sets.front().dim())};
  for (std::size_t k = 0; k < sets.size(); ++k) {
    std::vector<Point> grown;
    grown.reserve(acc.size() * sets[k].point_count());
    for (const Point& partial : acc) {
      for (std::size_t i = 0; i < sets[k].point_count(); ++i) {
        grown.push_back(partial + lambdas[k] * sets[k].point_at(i));
      }
    }
    acc = std::move(grown);
  }
  return CompactSet::points(acc);
}

}  // namespace svfkit
