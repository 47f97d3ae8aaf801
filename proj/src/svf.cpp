#include "svfkit/svf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "svfkit/error.hpp"

namespace svfkit {

namespace {

void flatten(const SetExpr& e, double dt, std::vector<Point>& pts, std::vector<Ball>& balls) {
  for (const PointExpr& p : e.points) pts.push_back(p.at(dt));
  for (const BallExpr& b : e.balls) balls.push_back(Ball{b.center.at(dt), b.radius});
  for (const SetExpr& part : e.parts) flatten(part, dt, pts, balls);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_domain(double t, double a, double b) {
  if (!(t >= a && t <= b)) {
    throw Error(ErrorCode::OutOfDomain,
                "t = " + fmt(t) + " is outside the domain [" + fmt(a) + ", " + fmt(b) + "]");
  }
}

}  // namespace

Point PointExpr::at(double dt) const {
  std::vector<double> v(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) v[i] = coords[i].at(dt);
  return Point(std::move(v));
}

bool PointExpr::is_constant() const noexcept {
  return std::all_of(coords.begin(), coords.end(), [](const AffineCoord& c) { return c.c1 == 0.0; });
}

std::size_t SetExpr::dim() const {
  if (!points.empty()) return points.front().coords.size();
  if (!balls.empty()) return balls.front().center.coords.size();
  for (const SetExpr& part : parts) {
    if (!part.empty()) return part.dim();
  }
  return 0;
}

bool SetExpr::empty() const noexcept {
  if (!points.empty() || !balls.empty()) return false;
  return std::all_of(parts.begin(), parts.end(), [](const SetExpr& p) { return p.empty(); });
}

bool SetExpr::is_constant() const noexcept {
  for (const PointExpr& p : points) {
    if (!p.is_constant()) return false;
  }
  for (const BallExpr& b : balls) {
    if (!b.center.is_constant()) return false;
  }
  return std::all_of(parts.begin(), parts.end(), [](const SetExpr& p) { return p.is_constant(); });
}

CompactSet SetExpr::at(double dt) const {
  std::vector<Point> pts;
  std::vector<Ball> balls;
  flatten(*this, dt, pts, balls);
  if (balls.empty()) return CompactSet::points(pts);
  if (pts.empty()) return CompactSet::balls(std::move(balls));
  const CompactSet parts[] = {CompactSet::points(pts), CompactSet::balls(std::move(balls))};
  return CompactSet::make_union(parts);
}

SetExpr SetExpr::constant(const CompactSet& s) {
  SetExpr e;
  auto to_expr = [](const Point& p) {
    PointExpr pe;
    for (double v : p.coords()) pe.coords.push_back({v, 0.0});
    return pe;
  };
  for (std::size_t i = 0; i < s.point_count(); ++i) e.points.push_back(to_expr(s.point_at(i)));
  for (const Ball& b : s.ball_list()) e.balls.push_back({to_expr(b.center), b.radius});
  return e;
}

bool Interval::contains(double t) const noexcept {
  const bool above = lo_closed ? t >= lo : t > lo;
  const bool below = hi_closed ? t <= hi : t < hi;
  return above && below;
}

std::string Interval::to_string() const {
  return std::string(lo_closed ? "[" : "(") + fmt(lo) + ", " + fmt(hi) + (hi_closed ? "]" : ")");
}

const char* to_string(Side side) noexcept { return side == Side::Left ? "left" : "right"; }

Svf::Svf(double a, double b, std::vector<Piece> pieces, std::vector<double> breakpoints,
         std::string name)
    : a_(a), b_(b), pieces_(std::move(pieces)), breakpoints_(std::move(breakpoints)),
      name_(std::move(name)) {
  if (!std::isfinite(a_) || !std::isfinite(b_) || !(a_ < b_)) {
    throw Error(ErrorCode::InvalidInput, "domain must satisfy a < b");
  }
  if (pieces_.empty()) throw Error(ErrorCode::InvalidInput, "an SVF needs at least one piece");
  dim_ = pieces_.front().value.dim();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    const std::string where = "piece " + std::to_string(i) + " " + p.interval.to_string();
    if (p.value.empty()) throw Error(ErrorCode::InvalidInput, where + ": empty set expression");
    if (p.value.dim() != dim_ || dim_ == 0) {
      throw Error(ErrorCode::InvalidInput, where + ": inconsistent dimension");
    }
    if (!(p.interval.lo <= p.interval.hi) || p.interval.lo < a_ || p.interval.hi > b_) {
      throw Error(ErrorCode::InvalidInput, where + ": interval must lie inside the domain");
    }
    if (p.interval.degenerate() && !(p.interval.lo_closed && p.interval.hi_closed)) {
      throw Error(ErrorCode::InvalidInput, where + ": a single-point piece must be closed");
    }
    if (!std::isfinite(p.t0)) throw Error(ErrorCode::InvalidInput, where + ": non-finite t0");
  }
  endpoints_ = {a_, b_};
  for (const Piece& p : pieces_) {
    endpoints_.push_back(p.interval.lo);
    endpoints_.push_back(p.interval.hi);
  }
  std::sort(endpoints_.begin(), endpoints_.end());
  endpoints_.erase(std::unique(endpoints_.begin(), endpoints_.end()), endpoints_.end());
  validate_tiling();

  for (double x : breakpoints_) {
    if (!(x >= a_ && x <= b_)) {
      throw Error(ErrorCode::InvalidInput, "breakpoint " + fmt(x) + " lies outside the domain");
    }
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());

  // Every set must be nonempty and well formed at every piece endpoint.
  for (const Piece& p : pieces_) {
    (void)p.value.at(p.interval.lo - p.t0);
    (void)p.value.at(p.interval.hi - p.t0);
  }
}

void Svf::validate_tiling() const {
  auto coverage = [&](double t) {
    return std::count_if(pieces_.begin(), pieces_.end(),
                         [t](const Piece& p) { return p.interval.contains(t); });
  };
  for (std::size_t i = 0; i < endpoints_.size(); ++i) {
    const double e = endpoints_[i];
    const auto n = coverage(e);
    if (n != 1) {
      throw Error(ErrorCode::InvalidInput,
                  "pieces do not tile the domain: t = " + fmt(e) + " is covered by " +
                      std::to_string(n) + " pieces");
    }
    if (i + 1 < endpoints_.size()) {
      const double hi = endpoints_[i + 1];
      const auto m = coverage(0.5 * (e + hi));
      if (m == 0) {
        throw Error(ErrorCode::InvalidInput,
                    "pieces do not tile the domain: gap (" + fmt(e) + ", " + fmt(hi) + ")");
      }
      if (m > 1) {
        throw Error(ErrorCode::InvalidInput,
                    "pieces do not tile the domain: overlap on (" + fmt(e) + ", " + fmt(hi) + ")");
      }
    }
  }
}

const Piece& Svf::piece_at(double t) const {
  require_domain(t, a_, b_);
  for (const Piece& p : pieces_) {
    if (p.interval.contains(t)) return p;
  }
  throw Error(ErrorCode::OutOfDomain, "no piece covers t = " + fmt(t));
}

CompactSet Svf::evaluate(double t) const {
  const Piece& p = piece_at(t);
  return p.value.at(t - p.t0);
}

const Piece& Svf::side_piece(double t, Side side) const {
  require_domain(t, a_, b_);
  if ((side == Side::Left && t == a_) || (side == Side::Right && t == b_)) {
    throw Error(ErrorCode::OutOfDomain, std::string("no ") + to_string(side) +
                                            " neighbourhood at t = " + fmt(t));
  }
  for (const Piece& p : pieces_) {
    if (p.interval.degenerate()) continue;
    const bool hit = side == Side::Left ? (p.interval.lo < t && t <= p.interval.hi)
                                        : (p.interval.lo <= t && t < p.interval.hi);
    if (hit) return p;
  }
  throw Error(ErrorCode::OutOfDomain, "no piece adjacent to t = " + fmt(t));
}

double Svf::graph_norm(NormKind norm) const {
  double best = 0.0;
  for (const Piece& p : pieces_) {
    best = std::max(best, set_norm(p.value.at(p.interval.lo - p.t0), norm));
    best = std::max(best, set_norm(p.value.at(p.interval.hi - p.t0), norm));
  }
  return best;
}

bool Svf::all_constant_pieces() const noexcept {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return p.value.is_constant(); });
}

bool Svf::has_balls() const noexcept {
  for (const Piece& p : pieces_) {
    if (!p.value.at(0.0).is_finite()) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw Error(ErrorCode::InvalidInput, "a partition needs two nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i])) throw Error(ErrorCode::InvalidInput, "non-finite node");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw Error(ErrorCode::InvalidInput, "partition nodes must be strictly increasing");
    }
  }
}

Partition Partition::uniform(double a, double b, std::size_t intervals) {
  if (intervals == 0) throw Error(ErrorCode::InvalidInput, "uniform partition needs intervals");
  std::vector<double> nodes(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
  }
  nodes.back() = b;
  return Partition(std::move(nodes));
}

Partition Partition::dyadic(double a, double b, int level) {
  if (level < 0 || level > 30) throw Error(ErrorCode::InvalidInput, "dyadic level out of range");
  return uniform(a, b, std::size_t{1} << level);
}

double Partition::mesh() const noexcept {
  double m = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) m = std::max(m, nodes_[i] - nodes_[i - 1]);
  return m;
}

std::size_t Partition::locate(double x) const {
  if (!(x >= nodes_.front() && x <= nodes_.back())) {
    throw Error(ErrorCode::OutOfDomain, "x = " + fmt(x) + " is outside the partition range");
  }
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  return static_cast<std::size_t>(it - nodes_.begin()) - 1;
}

std::size_t Partition::find(double x, double tol) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x - tol);
  if (it != nodes_.end() && *it <= x + tol) return static_cast<std::size_t>(it - nodes_.begin());
  return nodes_.size();
}

Partition Partition::merged(std::span<const double> extra) const {
  std::vector<double> all = nodes_;
  for (double x : extra) {
    if (x >= nodes_.front() && x <= nodes_.back()) all.push_back(x);
  }
  std::sort(all.begin(), all.end());
  const double tol = 1e-13 * std::max(1.0, nodes_.back() - nodes_.front());
  std::vector<double> out;
  out.reserve(all.size());
  for (double x : all) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  out.back() = nodes_.back();
  return Partition(std::move(out));
}

Partition Partition::without_open(double lo, double hi) const {
  std::vector<double> out;
  out.reserve(nodes_.size());
  for (double x : nodes_) {
    if (!(x > lo && x < hi)) out.push_back(x);
  }
  return Partition(std::move(out));
}

std::vector<double> delta_schedule(double a, double b, int count) {
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(std::max(count, 0)));
  double v = (b - a) / 10.0;
  for (int k = 1; k <= count; ++k) {
    v *= 0.5;
    d.push_back(v);
  }
  return d;
}

std::vector<double> probe_ladder(double x, double a, double b, std::span<const double> deltas) {
  std::vector<double> out;
  for (double d : deltas) {
    if (x - d >= a) out.push_back(x - d);
    if (x + d <= b) out.push_back(x + d);
  }
  return out;
}

}  // namespace svfkit
