#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace svfkit {

inline constexpr double kDefaultTieTol = 1e-9;

enum class NormKind { L1, L2, Linf };

const char* to_string(NormKind norm) noexcept;
NormKind norm_from_string(const std::string& name);

struct ToleranceConfig {
  double tie_tol = kDefaultTieTol;  // projection tie slack
  double sample_eps = 0.01;         // discretization resolution of continuous sets
  double conv_tol = 1e-6;           // Cauchy / convergence threshold

  // Throws InvalidInput unless all values are positive and tie_tol <= sample_eps.
  void validate() const;
};

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<double> coords) : coords_(coords) {}
  explicit Point(std::span<const double> coords) : coords_(coords.begin(), coords.end()) {}

  static Point zero(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& vec() const noexcept { return coords_; }
  bool is_finite() const noexcept;

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(double s);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator*(Point a, double s) { return a *= s; }

  // Lexicographic order; the canonical tie-breaking rule.
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point& a, const Point& b) { return a.coords_ <=> b.coords_; }

  std::string to_string() const;

 private:
  std::vector<double> coords_;
};

double norm(std::span<const double> v, NormKind kind);
double distance(std::span<const double> a, std::span<const double> b, NormKind kind);
inline double distance(const Point& a, const Point& b, NormKind kind) {
  return distance(a.coords(), b.coords(), kind);
}

// Closed ball of the analysis norm.
struct Ball {
  Point center;
  double radius = 0.0;
};

class KdTree;

enum class SetKind { FinitePoints, BallUnion, Union };

// Nonempty compact subset of R^d described as a finite union of points and
// closed norm-balls. Unions of unions are flattened on construction, so every
// set is a FinitePoints part plus a BallUnion part. Values are immutable.
class CompactSet {
 public:
  // Finite point cloud, deduplicated within `tie_tol` and stored sorted.
  static CompactSet points(const std::vector<Point>& pts, double tie_tol = kDefaultTieTol);
  static CompactSet point(const Point& p);
  static CompactSet balls(std::vector<Ball> balls);
  static CompactSet ball(const Point& center, double radius);
  static CompactSet make_union(std::span<const CompactSet> parts, double tie_tol = kDefaultTieTol);
  static CompactSet make_union(const CompactSet& a, const CompactSet& b,
                               double tie_tol = kDefaultTieTol);

  std::size_t dim() const noexcept { return dim_; }
  SetKind kind() const noexcept;
  bool is_finite() const noexcept { return balls_.empty(); }
  std::size_t component_count() const noexcept { return point_count() + balls_.size(); }

  std::size_t point_count() const noexcept { return dim_ == 0 ? 0 : flat_.size() / dim_; }
  std::span<const double> point_span(std::size_t i) const {
    return {flat_.data() + i * dim_, dim_};
  }
  Point point_at(std::size_t i) const { return Point(point_span(i)); }
  std::vector<Point> finite_points() const;
  std::span<const double> flat_points() const noexcept { return flat_; }
  const std::vector<Ball>& ball_list() const noexcept { return balls_; }

  // Membership within `tol` (distance to the set at most tol).
  bool contains(const Point& p, NormKind norm, double tol) const;

  // Structural equality of the description (same points, same balls).
  bool same_description(const CompactSet& other) const;

  const KdTree* index() const noexcept { return index_.get(); }

 private:
  CompactSet() = default;
  void build_index();

  std::size_t dim_ = 0;
  std::vector<double> flat_;
  std::vector<Ball> balls_;
  std::shared_ptr<const KdTree> index_;
};

double distance_point_set(const Point& p, const CompactSet& a, NormKind norm);

// Finite representative of the projection set: all minimizers within
// tie_tol of the minimum. For a ball the radial point is returned (the unique
// projection under L2; one of the projections under L1/Linf).
CompactSet project_point_set(const Point& p, const CompactSet& a, NormKind norm,
                             const ToleranceConfig& cfg);

// Lexicographically smallest element of project_point_set.
Point canonical_projection(const Point& p, const CompactSet& a, NormKind norm,
                           const ToleranceConfig& cfg);

// Element of the projection set closest to `target` (ties: lexicographic).
Point projection_nearest_to(const Point& p, const CompactSet& a, const Point& target,
                            NormKind norm, const ToleranceConfig& cfg);

struct DistanceEstimate {
  double value = 0.0;
  double error_bound = 0.0;  // true value lies in [value, value + error_bound]
  // Point of the first set attaining `value` (sample point for balls).
  Point witness;
};

// sup over a in A of dist(a, B). Exact for points, for balls inside or
// measured against a single component; otherwise an eps-net lower bound with
// error_bound <= sample_eps.
DistanceEstimate excess(const CompactSet& a, const CompactSet& b, NormKind norm,
                        double sample_eps);

struct HausdorffEstimate {
  double value = 0.0;
  double error_bound = 0.0;
};

HausdorffEstimate hausdorff(const CompactSet& a, const CompactSet& b, NormKind norm,
                            double sample_eps);

// |A| = haus(A, {0}); exact for every backend.
double set_norm(const CompactSet& a, NormKind norm);

// Finite S subset of A with haus(A, S) <= eps. Finite sets are returned unchanged.
CompactSet sample_to_finite(const CompactSet& a, double eps, NormKind norm);

// Point of `ball` nearest to p (p itself if inside).
Point project_onto_ball(const Point& p, const Ball& ball, NormKind norm);

}  // namespace svfkit
