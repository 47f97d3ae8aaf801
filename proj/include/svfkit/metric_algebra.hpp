#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svfkit/config.hpp"
#include "svfkit/geometry.hpp"

namespace svfkit {

// Which projection relation certifies a pair (a, b) of sets (A, B).
enum class PairWitness {
  BProjectsA,  // b is a nearest point of B to a
  AProjectsB,  // a is a nearest point of A to b
  Both,
};

const char* to_string(PairWitness w) noexcept;

struct MetricPair {
  Point a;
  Point b;
  PairWitness witness = PairWitness::BProjectsA;
};

struct MetricChain {
  std::vector<Point> points;
};

struct MetricCombinationSpec {
  std::vector<double> lambdas;
  std::vector<CompactSet> sets;
};

// True when b is a nearest point of B to a, or a is a nearest point of A to b,
// both up to tie_tol.
bool is_metric_pair(const Point& a, const Point& b, const CompactSet& A, const CompactSet& B,
                    NormKind norm, double tie_tol);

// Pairs of A and B. Finite sets are enumerated exactly. Ball components are
// sampled at sample_eps and every sample is paired with its exact projections
// onto the other set. Sorted by (a, b); throws CapExceededError above `cap`.
std::vector<MetricPair> metric_pairs(const CompactSet& A, const CompactSet& B, NormKind norm,
                                     const ToleranceConfig& cfg,
                                     std::size_t cap = kDefaultChainCap);

struct PairApproach {
  MetricPair pair;
  double residual = 0.0;  // max(|a - y_minus|, |b - y_plus|)
  bool exact = false;     // found by exhaustive enumeration of the pairs
};

inline constexpr std::size_t kPairEnumerationLimit = 4096;

// Metric pair of (L, R) closest to (y_minus, y_plus) in the max product
// metric. Finite sets with |L| |R| <= enumeration_limit are searched
// exhaustively; otherwise the two projection constructions
// (y_minus -> L -> R and y_plus -> R -> L) give an upper bound.
PairApproach nearest_metric_pair(const Point& y_minus, const Point& y_plus, const CompactSet& L,
                                 const CompactSet& R, NormKind norm, const ToleranceConfig& cfg,
                                 std::size_t enumeration_limit = kPairEnumerationLimit);

// Nearest element of an explicit pair list (first on ties).
PairApproach nearest_in_pairs(const Point& y_minus, const Point& y_plus,
                              std::span<const MetricPair> pairs, NormKind norm);

// max |a - b| over metric_pairs(A, B).
double hausdorff_via_pairs(const CompactSet& A, const CompactSet& B, NormKind norm,
                           const ToleranceConfig& cfg, std::size_t cap = kDefaultChainCap);

// Chain with points[j] == a, completed by canonical (lexicographically
// smallest) projections away from j. Throws InvalidAnchor if a is not in sets[j].
MetricChain chain_through(std::span<const CompactSet> sets, std::size_t j, const Point& a,
                          NormKind norm, const ToleranceConfig& cfg);

struct ChainEnumeration {
  std::vector<MetricChain> chains;
  bool truncated = false;  // stopped at the cap; `chains` is a partial result
};

// Every metric chain of the (discretized) sets, up to `cap` chains.
ChainEnumeration enumerate_chains(std::span<const CompactSet> sets, NormKind norm,
                                  const ToleranceConfig& cfg, std::size_t cap = kDefaultChainCap);

// As enumerate_chains, but a truncated enumeration throws CapExceededError.
std::vector<MetricChain> metric_chains(std::span<const CompactSet> sets, NormKind norm,
                                       const ToleranceConfig& cfg,
                                       std::size_t cap = kDefaultChainCap);

// { sum_i lambda_i a_i : (a_0, ..., a_n) a metric chain } as a finite set.
CompactSet metric_linear_combination(const MetricCombinationSpec& spec, NormKind norm,
                                     const ToleranceConfig& cfg,
                                     std::size_t cap = kDefaultChainCap);

// Minkowski combination over the full Cartesian product of finite sets.
CompactSet minkowski_combination(std::span<const double> lambdas,
                                 std::span<const CompactSet> sets,
                                 std::size_t cap = kDefaultChainCap);

}  // namespace svfkit
