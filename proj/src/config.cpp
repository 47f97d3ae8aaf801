#include "svfkit/config.hpp"

#include "svfkit/error.hpp"

namespace svfkit {

void AnalysisConfig::validate() const {
  tol.validate();
  if (chain_cap == 0) throw Error(ErrorCode::InvalidInput, "chain_cap must be positive");
  if (level_min < 1 || level_max < level_min || level_max > 24) {
    throw Error(ErrorCode::InvalidInput, "refinement levels must satisfy 1 <= level_min <= level_max <= 24");
  }
  if (delta_count < 3 || delta_count > 40) {
    throw Error(ErrorCode::InvalidInput, "delta_count must lie in [3, 40]");
  }
}

}  // namespace svfkit
