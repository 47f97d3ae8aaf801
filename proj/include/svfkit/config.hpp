#pragma once

#include <cstddef>

#include "svfkit/geometry.hpp"

namespace svfkit {

inline constexpr std::size_t kDefaultChainCap = 1'000'000;

// Settings shared by every analysis stage of one run.
struct AnalysisConfig {
  NormKind norm = NormKind::L2;
  ToleranceConfig tol;
  std::size_t chain_cap = kDefaultChainCap;
  int level_min = 3;     // first dyadic refinement level of selection partitions
  int level_max = 12;    // last refinement level tried before giving up
  int delta_count = 20;  // length of the one-sided delta ladder
  bool keep_chains = false;

  void validate() const;
};

}  // namespace svfkit
