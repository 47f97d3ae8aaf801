#include "svfkit/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "svfkit/error.hpp"

namespace svfkit {

namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw Error(ErrorCode::ParseError, source_ + ": " + path + ": " + message);
  }

  const json& field(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing field '" + key + "'");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "expected a finite number");
    return d;
  }

  bool boolean(const json& v, const std::string& path) const {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
  }

  const json& array(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

  AffineCoord coord(const json& v, const std::string& path) const {
    if (v.is_array()) {
      if (v.size() != 2) fail(path, "affine coordinate must be [c0, c1]");
      return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
    }
    return {number(v, path), 0.0};
  }

  PointExpr point(const json& v, const std::string& path) const {
    array(v, path);
    if (v.empty()) fail(path, "a point needs at least one coordinate");
    PointExpr p;
    for (std::size_t i = 0; i < v.size(); ++i) {
      p.coords.push_back(coord(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return p;
  }

  SetExpr set(const json& v, const std::string& path) const {
    if (!v.is_object()) fail(path, "expected a set object");
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (it.key() != "points" && it.key() != "balls" && it.key() != "union") {
        fail(path, "unknown set field '" + it.key() + "'");
      }
    }
    SetExpr e;
    if (auto it = v.find("points"); it != v.end()) {
      array(*it, path + ".points");
      for (std::size_t i = 0; i < it->size(); ++i) {
        e.points.push_back(point((*it)[i], path + ".points[" + std::to_string(i) + "]"));
      }
    }
    if (auto it = v.find("balls"); it != v.end()) {
      array(*it, path + ".balls");
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string bp = path + ".balls[" + std::to_string(i) + "]";
        BallExpr b;
        b.center = point(field((*it)[i], "center", bp), bp + ".center");
        b.radius = number(field((*it)[i], "radius", bp), bp + ".radius");
        if (b.radius < 0.0) fail(bp + ".radius", "radius must be >= 0");
        e.balls.push_back(std::move(b));
      }
    }
    if (auto it = v.find("union"); it != v.end()) {
      array(*it, path + ".union");
      for (std::size_t i = 0; i < it->size(); ++i) {
        e.parts.push_back(set((*it)[i], path + ".union[" + std::to_string(i) + "]"));
      }
    }
    if (e.empty()) fail(path, "set is empty");
    return e;
  }

  Piece piece(const json& v, const std::string& path) const {
    Piece p;
    const json& iv = array(field(v, "interval", path), path + ".interval");
    if (iv.size() != 2) fail(path + ".interval", "expected [lo, hi]");
    p.interval.lo = number(iv[0], path + ".interval[0]");
    p.interval.hi = number(iv[1], path + ".interval[1]");
    if (auto it = v.find("closed"); it != v.end()) {
      array(*it, path + ".closed");
      if (it->size() != 2) fail(path + ".closed", "expected [bool, bool]");
      p.interval.lo_closed = boolean((*it)[0], path + ".closed[0]");
      p.interval.hi_closed = boolean((*it)[1], path + ".closed[1]");
    }
    p.t0 = p.interval.lo;
    if (auto it = v.find("t0"); it != v.end()) p.t0 = number(*it, path + ".t0");
    if (auto it = v.find("analytic"); it != v.end()) {
      p.analytic = boolean(*it, path + ".analytic");
    }
    p.value = set(field(v, "set", path), path + ".set");
    return p;
  }

 private:
  std::string source_;
};

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

AnalysisConfig SvfSpec::apply(AnalysisConfig cfg) const {
  if (norm) cfg.norm = *norm;
  if (tie_tol) cfg.tol.tie_tol = *tie_tol;
  if (sample_eps) cfg.tol.sample_eps = *sample_eps;
  if (conv_tol) cfg.tol.conv_tol = *conv_tol;
  return cfg;
}

SvfSpec parse_svf_spec_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError,
                source + ":" + line_col(text, e.byte) + ": malformed JSON (" + e.what() + ")");
  }
  Reader r(source);
  if (!doc.is_object()) r.fail("$", "top level must be an object");

  const json& dom = r.array(r.field(doc, "domain", "$"), "domain");
  if (dom.size() != 2) r.fail("domain", "expected [a, b]");
  const double a = r.number(dom[0], "domain[0]");
  const double b = r.number(dom[1], "domain[1]");
  if (!(a < b)) r.fail("domain", "expected a < b");

  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) {
    if (!it->is_string()) r.fail("name", "expected a string");
    name = it->get<std::string>();
  }
  std::vector<double> breakpoints;
  if (auto it = doc.find("breakpoints"); it != doc.end()) {
    r.array(*it, "breakpoints");
    for (std::size_t i = 0; i < it->size(); ++i) {
      breakpoints.push_back(r.number((*it)[i], "breakpoints[" + std::to_string(i) + "]"));
    }
  }
  const json& pj = r.array(r.field(doc, "pieces", "$"), "pieces");
  if (pj.empty()) r.fail("pieces", "at least one piece is required");
  std::vector<Piece> pieces;
  std::size_t dim = 0;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string path = "pieces[" + std::to_string(i) + "]";
    Piece p = r.piece(pj[i], path);
    const std::size_t d = p.value.dim();
    if (dim == 0) dim = d;
    if (d != dim) r.fail(path + ".set", "dimension differs from earlier pieces");
    pieces.push_back(std::move(p));
  }
  if (auto it = doc.find("dim"); it != doc.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() != dim) {
      r.fail("dim", "does not match the dimension of the set expressions");
    }
  }

  std::optional<Svf> svf;
  try {
    svf.emplace(a, b, std::move(pieces), std::move(breakpoints), name);
  } catch (const Error& e) {
    r.fail("pieces", e.what());
  }
  SvfSpec spec{std::move(*svf), std::nullopt, std::nullopt, std::nullopt, std::nullopt};

  if (auto it = doc.find("norm"); it != doc.end()) {
    if (!it->is_string()) r.fail("norm", "expected \"l1\", \"l2\" or \"linf\"");
    try {
      spec.norm = norm_from_string(it->get<std::string>());
    } catch (const Error& e) {
      r.fail("norm", e.what());
    }
  }
  if (auto it = doc.find("tolerances"); it != doc.end()) {
    if (!it->is_object()) r.fail("tolerances", "expected an object");
    for (auto t = it->begin(); t != it->end(); ++t) {
      const std::string path = "tolerances." + t.key();
      const double v = r.number(t.value(), path);
      if (!(v > 0.0)) r.fail(path, "must be positive");
      if (t.key() == "tie_tol") {
        spec.tie_tol = v;
      } else if (t.key() == "sample_eps") {
        spec.sample_eps = v;
      } else if (t.key() == "conv_tol") {
        spec.conv_tol = v;
      } else {
        r.fail(path, "unknown tolerance");
      }
    }
  }
  return spec;
}

SvfSpec parse_svf_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_svf_spec_text(ss.str(), path);
}

}  // namespace svfkit
