#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "svfkit/geometry.hpp"

namespace svfkit {

// Static kd-tree over a flat row-major point array. Pruning uses the per-axis
// gap, which is a lower bound of the L1, L2 and Linf distances alike, so the
// same tree serves every NormKind.
class KdTree {
 public:
  KdTree(std::span<const double> flat, std::size_t dim);

  struct Hit {
    std::size_t index = 0;
    double distance = 0.0;
  };

  std::size_t size() const noexcept { return perm_.size(); }

  Hit nearest(std::span<const double> query, NormKind norm) const;

  // Indices of all points with distance <= radius, unordered.
  void within(std::span<const double> query, double radius, NormKind norm,
              std::vector<std::size_t>& out) const;

 private:
  static constexpr std::size_t kLeafSize = 8;

  std::span<const double> row(std::size_t i) const { return {flat_.data() + i * dim_, dim_}; }
  void build(std::size_t lo, std::size_t hi);
  void nearest_impl(std::size_t lo, std::size_t hi, std::span<const double> q, NormKind norm,
                    Hit& best) const;
  void within_impl(std::size_t lo, std::size_t hi, std::span<const double> q, double radius,
                   NormKind norm, std::vector<std::size_t>& out) const;

  std::vector<double> flat_;
  std::size_t dim_;
  std::vector<std::size_t> perm_;
  std::vector<unsigned> split_dim_;  // indexed by the median slot of each node
};

}  // namespace svfkit
