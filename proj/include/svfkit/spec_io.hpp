#pragma once

#include <optional>
#include <string>

#include "svfkit/config.hpp"
#include "svfkit/svf.hpp"

namespace svfkit {

// Parsed SVF description. Fields absent from the file stay empty so callers
// can layer command-line overrides on top.
struct SvfSpec {
  Svf svf;
  std::optional<NormKind> norm;
  std::optional<double> tie_tol;
  std::optional<double> sample_eps;
  std::optional<double> conv_tol;

  // cfg with the file's norm and tolerances applied.
  AnalysisConfig apply(AnalysisConfig cfg) const;
};

// JSON format:
//   { "name": str, "domain": [a, b], "norm": "l1"|"l2"|"linf",
//     "breakpoints": [x...], "tolerances": {"tie_tol", "sample_eps", "conv_tol"},
//     "pieces": [ { "interval": [lo, hi], "closed": [bool, bool], "t0": t,
//                   "analytic": bool, "set": SET } ] }
//   SET   = { "points": [POINT...], "balls": [{"center": POINT, "radius": r}],
//             "union": [SET...] }
//   POINT = [COORD...], COORD = c0 | [c0, c1] meaning c0 + c1 (t - t0).
// "closed" defaults to [true, true], "t0" to the interval's lower end.
// Errors are ParseError with "line:col" for syntax and a field path such as
// "pieces[1].set.balls[0].radius" for content.
SvfSpec parse_svf_spec_text(const std::string& text, const std::string& source = "<string>");
SvfSpec parse_svf_spec(const std::string& path);

}  // namespace svfkit
