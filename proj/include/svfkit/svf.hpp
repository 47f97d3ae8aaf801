#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "svfkit/geometry.hpp"

namespace svfkit {

// c0 + c1 * (t - t0), where t0 is the owning piece's reference time.
struct AffineCoord {
  double c0 = 0.0;
  double c1 = 0.0;
  double at(double dt) const noexcept { return c0 + c1 * dt; }
};

struct PointExpr {
  std::vector<AffineCoord> coords;
  Point at(double dt) const;
  bool is_constant() const noexcept;
};

struct BallExpr {
  PointExpr center;
  double radius = 0.0;
};

// Union of affine points, balls with affine centers, and nested unions.
struct SetExpr {
  std::vector<PointExpr> points;
  std::vector<BallExpr> balls;
  std::vector<SetExpr> parts;

  std::size_t dim() const;
  bool empty() const noexcept;
  bool is_constant() const noexcept;
  CompactSet at(double dt) const;

  static SetExpr constant(const CompactSet& s);
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double t) const noexcept;
  bool degenerate() const noexcept { return lo == hi; }
  std::string to_string() const;
};

struct Piece {
  Interval interval;
  double t0 = 0.0;
  SetExpr value;
  bool analytic = true;  // the expression extends continuously to the piece endpoints
};

enum class Side { Left, Right };

const char* to_string(Side side) noexcept;

// Piecewise set-valued function F: [a, b] -> K(R^d). Pieces tile [a, b]
// exactly; a degenerate piece [xi, xi] sets the value at a breakpoint.
class Svf {
 public:
  Svf(double a, double b, std::vector<Piece> pieces, std::vector<double> breakpoints = {},
      std::string name = {});

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  // Sorted distinct piece endpoints, including a and b.
  const std::vector<double>& piece_endpoints() const noexcept { return endpoints_; }

  const Piece& piece_at(double t) const;
  CompactSet evaluate(double t) const;

  // Piece covering (t - e, t) (Left) or (t, t + e) (Right) for small e > 0.
  const Piece& side_piece(double t, Side side) const;

  // sup over t of |F(t)|; exact since |F(t)| is convex on each affine piece.
  double graph_norm(NormKind norm) const;

  bool all_constant_pieces() const noexcept;
  bool has_balls() const noexcept;

 private:
  void validate_tiling() const;

  double a_;
  double b_;
  std::size_t dim_ = 0;
  std::vector<Piece> pieces_;
  std::vector<double> breakpoints_;
  std::vector<double> endpoints_;
  std::string name_;
};

// Strictly increasing nodes x_0 < ... < x_n with n >= 1.
class Partition {
 public:
  explicit Partition(std::vector<double> nodes);

  static Partition uniform(double a, double b, std::size_t intervals);
  static Partition dyadic(double a, double b, int level);

  const std::vector<double>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  double mesh() const noexcept;  // |chi|, the largest gap

  // Index i with x_i <= x < x_{i+1}, or n when x == x_n. x must lie in range.
  std::size_t locate(double x) const;
  // Index of a node equal to x (within tol), or size() if absent.
  std::size_t find(double x, double tol = 0.0) const;

  // Union with extra nodes inside [front, back]; near-duplicates are merged.
  Partition merged(std::span<const double> extra) const;
  // Drops nodes in the open interval (lo, hi).
  Partition without_open(double lo, double hi) const;

 private:
  std::vector<double> nodes_;
};

// delta_k = 2^-k (b - a) / 10 for k = 1..count.
std::vector<double> delta_schedule(double a, double b, int count);

// Points x - delta_k and x + delta_k that fall inside [a, b].
std::vector<double> probe_ladder(double x, double a, double b, std::span<const double> deltas);

}  // namespace svfkit
