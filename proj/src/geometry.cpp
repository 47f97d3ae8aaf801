#include "svfkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "svfkit/error.hpp"
#include "svfkit/kdtree.hpp"

namespace svfkit {

namespace {

constexpr std::size_t kIndexThreshold = 32;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Greedy deduplication in lexicographic order; two points are merged when
// their coordinates agree within tol (max-coordinate distance).
std::vector<double> dedupe_sorted(std::vector<Point> pts, double tol) {
  std::sort(pts.begin(), pts.end());
  std::vector<const Point*> kept;
  kept.reserve(pts.size());
  for (const Point& p : pts) {
    bool duplicate = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      const Point& q = **it;
      if (q[0] < p[0] - tol) break;
      if (distance(p, q, NormKind::Linf) <= tol) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(&p);
  }
  std::vector<double> flat;
  if (!kept.empty()) flat.reserve(kept.size() * kept.front()->dim());
  for (const Point* p : kept) flat.insert(flat.end(), p->vec().begin(), p->vec().end());
  return flat;
}

void require_dim(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + ": dimension mismatch (" +
                                             std::to_string(expected) + " vs " +
                                             std::to_string(got) + ")");
  }
}

double ball_gap(std::span<const double> p, const Ball& b, NormKind norm) {
  return std::max(0.0, distance(p, b.center.coords(), norm) - b.radius);
}

// All elements of the projection set of p onto a (finite representative).
void collect_projections(const Point& p, const CompactSet& a, NormKind norm, double tie_tol,
                         std::vector<Point>& out) {
  const double m = distance_point_set(p, a, norm);
  const double limit = m + tie_tol;
  if (a.point_count() > 0) {
    if (const KdTree* tree = a.index()) {
      std::vector<std::size_t> idx;
      tree->within(p.coords(), limit, norm, idx);
      std::sort(idx.begin(), idx.end());
      for (std::size_t i : idx) out.push_back(a.point_at(i));
    } else {
      for (std::size_t i = 0; i < a.point_count(); ++i) {
        if (distance(p.coords(), a.point_span(i), norm) <= limit) out.push_back(a.point_at(i));
      }
    }
  }
  for (const Ball& b : a.ball_list()) {
    if (ball_gap(p.coords(), b, norm) <= limit) out.push_back(project_onto_ball(p, b, norm));
  }
}

// Cover radius of a cubic grid with spacing h, measured in `norm`.
double grid_cover_radius(double h, std::size_t dim, NormKind norm) {
  switch (norm) {
    case NormKind::L1:
      return 0.5 * h * static_cast<double>(dim);
    case NormKind::L2:
      return 0.5 * h * std::sqrt(static_cast<double>(dim));
    case NormKind::Linf:
      return 0.5 * h;
  }
  return h;
}

std::vector<Point> ball_net(const Ball& ball, double eps, NormKind norm) {
  const std::size_t dim = ball.center.dim();
  if (ball.radius == 0.0) return {ball.center};
  // Euclidean projection onto a Euclidean ball is nonexpansive; for the other
  // norms the radial point is within twice the grid distance.
  const double factor = norm == NormKind::L2 ? 1.0 : 2.0;
  const double unit_cover = grid_cover_radius(1.0, dim, norm);
  const double h_max = eps / (factor * unit_cover);
  const auto per_axis =
      static_cast<std::size_t>(std::ceil(2.0 * ball.radius / h_max)) + 1;
  const double h = 2.0 * ball.radius / static_cast<double>(per_axis - 1);
  const double cover = grid_cover_radius(h, dim, norm);

  std::vector<Point> net;
  std::vector<std::size_t> counter(dim, 0);
  Point g = ball.center;
  while (true) {
    for (std::size_t k = 0; k < dim; ++k) {
      g[k] = ball.center[k] - ball.radius + h * static_cast<double>(counter[k]);
    }
    const double dg = distance(g, ball.center, norm);
    if (dg <= ball.radius) {
      net.push_back(g);
    } else if (dg - ball.radius <= cover) {
      net.push_back(project_onto_ball(g, ball, norm));
    }
    std::size_t k = 0;
    while (k < dim && ++counter[k] == per_axis) {
      counter[k] = 0;
      ++k;
    }
    if (k == dim) break;
  }
  return net;
}

// Point of the ball farthest from `from` (any boundary point when centered).
Point farthest_in_ball(const Ball& ball, std::span<const double> from, NormKind norm) {
  Point dir = ball.center - Point(from);
  const double len = svfkit::norm(dir.coords(), norm);
  if (len == 0.0) {
    Point e = Point::zero(ball.center.dim());
    e[0] = ball.radius;
    return ball.center + e;
  }
  return ball.center + (ball.radius / len) * dir;
}

}  // namespace

const char* to_string(NormKind norm) noexcept {
  switch (norm) {
    case NormKind::L1:
      return "l1";
    case NormKind::L2:
      return "l2";
    case NormKind::Linf:
      return "linf";
  }
  return "?";
}

NormKind norm_from_string(const std::string& name) {
  if (name == "l1" || name == "L1") return NormKind::L1;
  if (name == "l2" || name == "L2") return NormKind::L2;
  if (name == "linf" || name == "Linf" || name == "LINF") return NormKind::Linf;
  throw Error(ErrorCode::InvalidInput, "unknown norm '" + name + "' (expected l1, l2 or linf)");
}

void ToleranceConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(tie_tol) || !positive(sample_eps) || !positive(conv_tol)) {
    throw Error(ErrorCode::InvalidInput, "tolerances must be finite and positive");
  }
  if (tie_tol > sample_eps) {
    throw Error(ErrorCode::InvalidInput, "tie_tol must not exceed sample_eps");
  }
}

bool Point::is_finite() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); });
}

Point& Point::operator+=(const Point& other) {
  require_dim(dim(), other.dim(), "point addition");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  require_dim(dim(), other.dim(), "point subtraction");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (double& v : coords_) v *= s;
  return *this;
}

std::string Point::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) os << ", ";
    os << coords_[i];
  }
  os << ')';
  return os.str();
}

double norm(std::span<const double> v, NormKind kind) {
  double acc = 0.0;
  switch (kind) {
    case NormKind::L1:
      for (double x : v) acc += std::abs(x);
      return acc;
    case NormKind::L2:
      for (double x : v) acc += x * x;
      return std::sqrt(acc);
    case NormKind::Linf:
      for (double x : v) acc = std::max(acc, std::abs(x));
      return acc;
  }
  return acc;
}

double distance(std::span<const double> a, std::span<const double> b, NormKind kind) {
  double acc = 0.0;
  const std::size_t n = a.size();
  switch (kind) {
    case NormKind::L1:
      for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    case NormKind::L2:
      for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    case NormKind::Linf:
      for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, std::abs(a[i] - b[i]));
      return acc;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// CompactSet

CompactSet CompactSet::points(const std::vector<Point>& pts, double tie_tol) {
  if (pts.empty()) throw Error(ErrorCode::InvalidInput, "empty set description");
  const std::size_t dim = pts.front().dim();
  if (dim == 0) throw Error(ErrorCode::InvalidInput, "points must have dimension >= 1");
  for (const Point& p : pts) {
    require_dim(dim, p.dim(), "finite set");
    if (!p.is_finite()) throw Error(ErrorCode::InvalidInput, "non-finite coordinate");
  }
  CompactSet s;
  s.dim_ = dim;
  s.flat_ = dedupe_sorted(pts, tie_tol);
  s.build_index();
  return s;
}

CompactSet CompactSet::point(const Point& p) { return points({p}); }

CompactSet CompactSet::balls(std::vector<Ball> balls) {
  if (balls.empty()) throw Error(ErrorCode::InvalidInput, "empty set description");
  const std::size_t dim = balls.front().center.dim();
  if (dim == 0) throw Error(ErrorCode::InvalidInput, "ball centers must have dimension >= 1");
  for (const Ball& b : balls) {
    require_dim(dim, b.center.dim(), "ball union");
    if (!b.center.is_finite() || !std::isfinite(b.radius) || b.radius < 0.0) {
      throw Error(ErrorCode::InvalidInput, "ball needs a finite center and radius >= 0");
    }
  }
  std::sort(balls.begin(), balls.end(), [](const Ball& x, const Ball& y) {
    if (x.center != y.center) return x.center < y.center;
    return x.radius < y.radius;
  });
  balls.erase(std::unique(balls.begin(), balls.end(),
                          [](const Ball& x, const Ball& y) {
                            return x.center == y.center && x.radius == y.radius;
                          }),
              balls.end());
  CompactSet s;
  s.dim_ = dim;
  s.balls_ = std::move(balls);
  return s;
}

CompactSet CompactSet::ball(const Point& center, double radius) {
  return balls({Ball{center, radius}});
}

CompactSet CompactSet::make_union(std::span<const CompactSet> parts, double tie_tol) {
  if (parts.empty()) throw Error(ErrorCode::InvalidInput, "empty union");
  const std::size_t dim = parts.front().dim();
  std::vector<Point> pts;
  std::vector<Ball> balls;
  for (const CompactSet& part : parts) {
    require_dim(dim, part.dim(), "union");
    for (std::size_t i = 0; i < part.point_count(); ++i) pts.push_back(part.point_at(i));
    balls.insert(balls.end(), part.balls_.begin(), part.balls_.end());
  }
  CompactSet s;
  if (!balls.empty()) s = CompactSet::balls(std::move(balls));
  if (!pts.empty()) {
    CompactSet p = CompactSet::points(pts, tie_tol);
    s.flat_ = std::move(p.flat_);
    s.index_ = std::move(p.index_);
  }
  s.dim_ = dim;
  return s;
}

CompactSet CompactSet::make_union(const CompactSet& a, const CompactSet& b, double tie_tol) {
  const CompactSet parts[] = {a, b};
  return make_union(parts, tie_tol);
}

SetKind CompactSet::kind() const noexcept {
  if (balls_.empty()) return SetKind::FinitePoints;
  if (flat_.empty()) return SetKind::BallUnion;
  return SetKind::Union;
}

std::vector<Point> CompactSet::finite_points() const {
  std::vector<Point> out;
  out.reserve(point_count());
  for (std::size_t i = 0; i < point_count(); ++i) out.push_back(point_at(i));
  return out;
}

bool CompactSet::contains(const Point& p, NormKind norm, double tol) const {
  return distance_point_set(p, *this, norm) <= tol;
}

bool CompactSet::same_description(const CompactSet& other) const {
  if (dim_ != other.dim_ || flat_ != other.flat_ || balls_.size() != other.balls_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < balls_.size(); ++i) {
    if (balls_[i].center != other.balls_[i].center || balls_[i].radius != other.balls_[i].radius) {
      return false;
    }
  }
  return true;
}

void CompactSet::build_index() {
  if (point_count() > kIndexThreshold) {
    index_ = std::make_shared<const KdTree>(flat_, dim_);
  } else {
    index_.reset();
  }
}

// ---------------------------------------------------------------------------
// Distances and projections

Point project_onto_ball(const Point& p, const Ball& ball, NormKind norm) {
  const double d = distance(p, ball.center, norm);
  if (d <= ball.radius) return p;
  return ball.center + (ball.radius / d) * (p - ball.center);
}

double distance_point_set(const Point& p, const CompactSet& a, NormKind norm) {
  require_dim(a.dim(), p.dim(), "distance_point_set");
  double best = kInf;
  if (a.point_count() > 0) {
    if (const KdTree* tree = a.index()) {
      best = tree->nearest(p.coords(), norm).distance;
    } else {
      for (std::size_t i = 0; i < a.point_count(); ++i) {
        best = std::min(best, distance(p.coords(), a.point_span(i), norm));
      }
    }
  }
  for (const Ball& b : a.ball_list()) best = std::min(best, ball_gap(p.coords(), b, norm));
  return best;
}

CompactSet project_point_set(const Point& p, const CompactSet& a, NormKind norm,
                             const ToleranceConfig& cfg) {
  std::vector<Point> out;
  collect_projections(p, a, norm, cfg.tie_tol, out);
  return CompactSet::points(out, cfg.tie_tol);
}

Point canonical_projection(const Point& p, const CompactSet& a, NormKind norm,
                           const ToleranceConfig& cfg) {
  std::vector<Point> out;
  collect_projections(p, a, norm, cfg.tie_tol, out);
  return *std::min_element(out.begin(), out.end());
}

Point projection_nearest_to(const Point& p, const CompactSet& a, const Point& target,
                            NormKind norm, const ToleranceConfig& cfg) {
  std::vector<Point> out;
  collect_projections(p, a, norm, cfg.tie_tol, out);
  const Point* best = &out.front();
  double best_d = distance(*best, target, norm);
  for (const Point& q : out) {
    const double d = distance(q, target, norm);
    if (d < best_d || (d == best_d && q < *best)) {
      best = &q;
      best_d = d;
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Hausdorff machinery

DistanceEstimate excess(const CompactSet& a, const CompactSet& b, NormKind norm,
                        double sample_eps) {
  require_dim(a.dim(), b.dim(), "excess");
  DistanceEstimate est;
  est.value = -1.0;
  double upper = 0.0;
  for (std::size_t i = 0; i < a.point_count(); ++i) {
    const Point p = a.point_at(i);
    const double d = distance_point_set(p, b, norm);
    if (d > est.value) {
      est.value = d;
      est.witness = p;
    }
    upper = std::max(upper, d);
  }
  for (const Ball& ball : a.ball_list()) {
    // Exact contribution against each single component of b; the minimum is
    // an upper bound for the contribution against the whole union.
    double ub = kInf;
    Point ub_witness;
    if (b.point_count() > 0) {
      double dc;
      std::size_t nearest_idx = 0;
      if (const KdTree* tree = b.index()) {
        const auto hit = tree->nearest(ball.center.coords(), norm);
        dc = hit.distance;
        nearest_idx = hit.index;
      } else {
        dc = kInf;
        for (std::size_t i = 0; i < b.point_count(); ++i) {
          const double d = distance(ball.center.coords(), b.point_span(i), norm);
          if (d < dc) {
            dc = d;
            nearest_idx = i;
          }
        }
      }
      ub = dc + ball.radius;
      ub_witness = farthest_in_ball(ball, b.point_span(nearest_idx), norm);
    }
    for (const Ball& other : b.ball_list()) {
      const double e =
          std::max(0.0, distance(ball.center, other.center, norm) + ball.radius - other.radius);
      if (e < ub) {
        ub = e;
        ub_witness = farthest_in_ball(ball, other.center.coords(), norm);
      }
    }
    if (ub <= 0.0 || b.component_count() == 1) {
      if (ub > est.value) {
        est.value = ub;
        est.witness = ub <= 0.0 ? ball.center : ub_witness;
      }
      upper = std::max(upper, ub);
      continue;
    }
    if (ub <= est.value) continue;  // cannot raise the maximum
    double lb = -1.0;
    Point lb_witness;
    for (const Point& q : ball_net(ball, sample_eps, norm)) {
      const double d = distance_point_set(q, b, norm);
      if (d > lb) {
        lb = d;
        lb_witness = q;
      }
    }
    if (lb > est.value) {
      est.value = lb;
      est.witness = lb_witness;
    }
    upper = std::max(upper, std::min(ub, lb + sample_eps));
  }
  est.value = std::max(est.value, 0.0);
  est.error_bound = std::max(0.0, upper - est.value);
  return est;
}

HausdorffEstimate hausdorff(const CompactSet& a, const CompactSet& b, NormKind norm,
                            double sample_eps) {
  if (a.same_description(b)) return {};
  const DistanceEstimate ab = excess(a, b, norm, sample_eps);
  const DistanceEstimate ba = excess(b, a, norm, sample_eps);
  HausdorffEstimate h;
  h.value = std::max(ab.value, ba.value);
  h.error_bound = std::max(ab.value + ab.error_bound, ba.value + ba.error_bound) - h.value;
  return h;
}

double set_norm(const CompactSet& a, NormKind norm) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.point_count(); ++i) {
    best = std::max(best, svfkit::norm(a.point_span(i), norm));
  }
  for (const Ball& b : a.ball_list()) {
    best = std::max(best, svfkit::norm(b.center.coords(), norm) + b.radius);
  }
  return best;
}

CompactSet sample_to_finite(const CompactSet& a, double eps, NormKind norm) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidInput, "sample_to_finite needs eps > 0");
  if (a.is_finite()) return a;
  std::vector<Point> pts = a.finite_points();
  for (const Ball& b : a.ball_list()) {
    std::vector<Point> net = ball_net(b, eps, norm);
    pts.insert(pts.end(), std::make_move_iterator(net.begin()), std::make_move_iterator(net.end()));
  }
  return CompactSet::points(pts);
}

}  // namespace svfkit
