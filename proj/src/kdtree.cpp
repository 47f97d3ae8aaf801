#include "svfkit/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace svfkit {

KdTree::KdTree(std::span<const double> flat, std::size_t dim)
    : flat_(flat.begin(), flat.end()), dim_(dim) {
  const std::size_t n = dim_ == 0 ? 0 : flat_.size() / dim_;
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  split_dim_.assign(n, 0);
  build(0, n);
}

void KdTree::build(std::size_t lo, std::size_t hi) {
  if (hi - lo <= kLeafSize) return;
  // split along the widest extent
  unsigned best_axis = 0;
  double best_extent = -1.0;
  for (std::size_t k = 0; k < dim_; ++k) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = flat_[perm_[i] * dim_ + k];
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    if (mx - mn > best_extent) {
      best_extent = mx - mn;
      best_axis = static_cast<unsigned>(k);
    }
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(perm_.begin() + lo, perm_.begin() + mid, perm_.begin() + hi,
                   [&](std::size_t x, std::size_t y) {
                     return flat_[x * dim_ + best_axis] < flat_[y * dim_ + best_axis];
                   });
  split_dim_[mid] = best_axis;
  build(lo, mid);
  build(mid + 1, hi);
}

KdTree::Hit KdTree::nearest(std::span<const double> query, NormKind norm) const {
  Hit best{0, std::numeric_limits<double>::infinity()};
  nearest_impl(0, perm_.size(), query, norm, best);
  return best;
}

void KdTree::nearest_impl(std::size_t lo, std::size_t hi, std::span<const double> q,
                          NormKind norm, Hit& best) const {
  if (hi - lo <= kLeafSize) {
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = distance(q, row(perm_[i]), norm);
      if (d < best.distance || (d == best.distance && perm_[i] < best.index)) {
        best = {perm_[i], d};
      }
    }
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const std::size_t axis = split_dim_[mid];
  const std::size_t m = perm_[mid];
  const double d = distance(q, row(m), norm);
  if (d < best.distance || (d == best.distance && m < best.index)) best = {m, d};
  const double diff = q[axis] - flat_[m * dim_ + axis];
  if (diff < 0) {
    nearest_impl(lo, mid, q, norm, best);
    if (std::abs(diff) <= best.distance) nearest_impl(mid + 1, hi, q, norm, best);
  } else {
    nearest_impl(mid + 1, hi, q, norm, best);
    if (std::abs(diff) <= best.distance) nearest_impl(lo, mid, q, norm, best);
  }
}

void KdTree::within(std::span<const double> query, double radius, NormKind norm,
                    std::vector<std::size_t>& out) const {
  within_impl(0, perm_.size(), query, radius, norm, out);
}

void KdTree::within_impl(std::size_t lo, std::size_t hi, std::span<const double> q,
                         double radius, NormKind norm, std::vector<std::size_t>& out) const {
  if (hi - lo <= kLeafSize) {
    for (std::size_t i = lo; i < hi; ++i) {
      if (distance(q, row(perm_[i]), norm) <= radius) out.push_back(perm_[i]);
    }
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const std::size_t axis = split_dim_[mid];
  const std::size_t m = perm_[mid];
  if (distance(q, row(m), norm) <= radius) out.push_back(m);
  const double diff = q[axis] - flat_[m * dim_ + axis];
  if (diff <= radius) within_impl(lo, mid, q, radius, norm, out);
  if (-diff <= radius) within_impl(mid + 1, hi, q, radius, norm, out);
}

}  // namespace svfkit
