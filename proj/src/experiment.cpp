#include "svfkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "svfkit/error.hpp"
#include "svfkit/metric_algebra.hpp"
#include "svfkit/selections.hpp"
#include "svfkit/spec_io.hpp"

namespace svfkit {

namespace {

using nlohmann::json;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::size_t rows, const std::string& header)
      : out_(path) {
    if (!out_) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
    out_.precision(17);
    out_ << "# count=" << rows << "\n" << header << "\n";
  }

  CsvWriter& cell(double v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& cell(std::size_t v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& cell(const std::string& v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& cells(const Point& p) {
    for (double c : p.coords()) cell(c);
    return *this;
  }
  void end() {
    out_ << "\n";
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ",";
    first_ = false;
  }

  std::ofstream out_;
  bool first_ = true;
};

std::string coord_header(const std::string& prefix, std::size_t dim) {
  std::string h;
  for (std::size_t i = 0; i < dim; ++i) {
    if (i) h += ",";
    h += prefix + std::to_string(i);
  }
  return h;
}

json tolerances_json(const AnalysisConfig& cfg) {
  return {{"norm", to_string(cfg.norm)},
          {"tie_tol", cfg.tol.tie_tol},
          {"sample_eps", cfg.tol.sample_eps},
          {"conv_tol", cfg.tol.conv_tol},
          {"chain_cap", cfg.chain_cap},
          {"level_min", cfg.level_min},
          {"level_max", cfg.level_max},
          {"delta_count", cfg.delta_count}};
}

json defect_json(const InclusionDefect& d) {
  return {{"value", d.value}, {"witness", point_json(d.witness)}};
}

void write_set_csv(const std::filesystem::path& path, const CompactSet& s,
                   std::vector<std::string>& files) {
  const auto pts = s.finite_points();
  CsvWriter w(path, pts.size() + s.ball_list().size(), "kind,radius," + coord_header("y", s.dim()));
  for (const Point& p : pts) {
    w.cell(std::string("point")).cell(0.0).cells(p);
    w.end();
  }
  for (const Ball& b : s.ball_list()) {
    w.cell(std::string("ball")).cell(b.radius).cells(b.center);
    w.end();
  }
  files.push_back(path.string());
}

double default_xi(const Svf& F, const std::optional<double>& xi) {
  if (xi) return *xi;
  if (!F.breakpoints().empty()) return F.breakpoints().front();
  throw Error(ErrorCode::InvalidInput, "no --xi given and the SVF declares no breakpoints");
}

json run_jump(const Svf& F, double xi, const AnalysisConfig& cfg,
              const std::filesystem::path& dir, std::vector<std::string>& files) {
  const JumpAnalysis ja = theorem_check(F, xi, cfg);
  json r = jump_analysis_json(ja);

  const std::size_t dim = F.dim();
  {
    CsvWriter w(dir / "af_points.csv", ja.A_F.midpoints.size(),
                "member,mode," + coord_header("y", dim) + ",gap_minus,gap_plus");
    for (std::size_t i = 0; i < ja.A_F.midpoints.size(); ++i) {
      const auto& m = ja.A_F.family.members[ja.A_F.members[i]];
      w.cell(ja.A_F.members[i]).cell(std::string(to_string(m.anchor.mode))).cells(ja.A_F.midpoints[i]);
      w.cell(ja.A_F.one_sided[i].gap_minus).cell(ja.A_F.one_sided[i].gap_plus);
      w.end();
    }
    files.push_back((dir / "af_points.csv").string());
  }
  write_set_csv(dir / "metric_average.csv", ja.metric_avg, files);
  {
    CsvWriter w(dir / "pairs.csv", ja.pairs.size(),
                coord_header("a", dim) + "," + coord_header("b", dim) + ",witness");
    for (const MetricPair& p : ja.pairs) {
      w.cells(p.a).cells(p.b).cell(std::string(to_string(p.witness)));
      w.end();
    }
    files.push_back((dir / "pairs.csv").string());
  }
  {
    std::size_t rows = 0;
    for (const auto& p : ja.prop2.pairs) rows += p.residuals.size();
    CsvWriter w(dir / "prop2_residuals.csv", rows, "pair,k,delta,residual,exact");
    for (std::size_t i = 0; i < ja.prop2.pairs.size(); ++i) {
      const auto& p = ja.prop2.pairs[i];
      for (std::size_t k = 0; k < p.residuals.size(); ++k) {
        w.cell(i).cell(k + 1).cell(ja.prop2.deltas[k]).cell(p.residuals[k]);
        w.cell(std::string(p.exact ? "true" : "false"));
        w.end();
      }
    }
    files.push_back((dir / "prop2_residuals.csv").string());
  }
  return r;
}

json run_gallery(const Svf& F, double xi, const AnalysisConfig& cfg, std::size_t max_members,
                 const std::filesystem::path& dir, std::vector<std::string>& files) {
  const SelectionFamily fam = selection_family(F, xi, cfg);
  const std::size_t written = std::min(max_members, fam.members.size());
  std::size_t rows = 0;
  for (std::size_t m = 0; m < written; ++m) rows += fam.members[m].size();
  CsvWriter w(dir / "gallery.csv", rows, "member,mode,x," + coord_header("y", F.dim()));
  json members = json::array();
  for (std::size_t m = 0; m < written; ++m) {
    const SelectionApprox& s = fam.members[m];
    const Partition& g = s.eval_grid();
    for (std::size_t i = 0; i < s.size(); ++i) {
      w.cell(m).cell(std::string(to_string(s.anchor.mode))).cell(g[i]).cells(s.value(i));
      w.end();
    }
    members.push_back({{"anchor", s.anchor.describe()},
                       {"refinement_level", s.refinement_level},
                       {"cauchy_gap", s.cauchy_gap},
                       {"anchor_drift", s.anchor_drift}});
  }
  files.push_back((dir / "gallery.csv").string());
  json flagged = json::array();
  for (const FlaggedMember& f : fam.flagged) {
    flagged.push_back({{"anchor", f.anchor.describe()},
                       {"message", f.message},
                       {"witness_x", f.witness_x},
                       {"witness_gap", f.witness_gap}});
  }
  return {{"xi", xi},
          {"family_size", fam.members.size()},
          {"members_written", written},
          {"anchors", {{"at_xi", fam.anchors_at_xi},
                       {"left", fam.anchors_left},
                       {"right", fam.anchors_right},
                       {"straddle", fam.anchors_straddle}}},
          {"pair_count", fam.pair_count},
          {"members", members},
          {"flagged", flagged},
          {"tolerance", cfg.tol.conv_tol}};
}

json run_variation(const Svf& F, const AnalysisConfig& cfg, const std::filesystem::path& dir,
                   std::vector<std::string>& files) {
  const VariationProfile v = total_variation(F, cfg);
  CsvWriter w(dir / "variation.csv", v.grid.size(), "x,v");
  for (std::size_t i = 0; i < v.grid.size(); ++i) {
    w.cell(v.grid[i]).cell(v.values[i]);
    w.end();
  }
  files.push_back((dir / "variation.csv").string());
  return variation_json(v);
}

json run_study(const Svf& F, const ExperimentConfig& ec, const AnalysisConfig& cfg,
               const std::filesystem::path& dir, std::vector<std::string>& files) {
  KernelKind kind;
  if (ec.kernel == "fejer") {
    kind = KernelKind::FejerLike;
  } else if (ec.kernel == "window") {
    kind = KernelKind::WindowAverage;
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown kernel '" + ec.kernel + "' (fejer | window)");
  }
  std::vector<double> schedule = ec.schedule;
  if (schedule.empty()) {
    for (int k = 0; k < 4; ++k) {
      schedule.push_back(kind == KernelKind::FejerLike ? 4.0 * std::ldexp(1.0, k)
                                                       : (F.b() - F.a()) / 10.0 * std::ldexp(1.0, -k));
    }
  }
  const double x = ec.xi ? *ec.xi
                         : (F.breakpoints().empty() ? 0.5 * (F.a() + F.b()) : F.breakpoints().front());
  const ConvergenceStudy s = convergence_study(F, x, kind, schedule, cfg);
  CsvWriter w(dir / "study.csv", s.rows.size(), "parameter,distance,output_size");
  for (const StudyRow& r : s.rows) {
    w.cell(r.parameter).cell(r.distance).cell(r.output_size);
    w.end();
  }
  files.push_back((dir / "study.csv").string());
  return study_json(s, cfg.tol.conv_tol);
}

double brute_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b, NormKind norm) {
  auto one_way = [&](const std::vector<Point>& p, const std::vector<Point>& q) {
    double worst = 0.0;
    for (const Point& x : p) {
      double best = INFINITY;
      for (const Point& y : q) best = std::min(best, distance(x, y, norm));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

json run_crosscheck(const ExperimentConfig& ec, const AnalysisConfig& cfg,
                    const std::filesystem::path& dir, std::vector<std::string>& files) {
  std::mt19937_64 rng(ec.seed);
  std::uniform_int_distribution<int> dim_dist(1, 3);
  std::uniform_int_distribution<int> size_dist(1, 12);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  CsvWriter w(dir / "crosscheck.csv", static_cast<std::size_t>(ec.trials),
              "trial,dim,size_a,size_b,hausdorff,via_pairs,brute,abs_diff");
  std::size_t mismatches = 0;
  double worst = 0.0;
  for (int t = 0; t < ec.trials; ++t) {
    const std::size_t d = static_cast<std::size_t>(dim_dist(rng));
    auto draw = [&] {
      std::vector<Point> pts(static_cast<std::size_t>(size_dist(rng)));
      for (Point& p : pts) {
        std::vector<double> c(d);
        for (double& v : c) v = coord(rng);
        p = Point(std::move(c));
      }
      return pts;
    };
    const auto pa = draw();
    const auto pb = draw();
    const CompactSet A = CompactSet::points(pa, cfg.tol.tie_tol);
    const CompactSet B = CompactSet::points(pb, cfg.tol.tie_tol);
    const double h = hausdorff(A, B, cfg.norm, cfg.tol.sample_eps).value;
    const double hp = hausdorff_via_pairs(A, B, cfg.norm, cfg.tol);
    const double hb = brute_hausdorff(pa, pb, cfg.norm);
    const double diff = std::max(std::abs(h - hb), std::abs(hp - hb));
    worst = std::max(worst, diff);
    if (diff > 1e-12) ++mismatches;
    w.cell(static_cast<std::size_t>(t)).cell(d).cell(pa.size()).cell(pb.size());
    w.cell(h).cell(hp).cell(hb).cell(diff);
    w.end();
  }
  files.push_back((dir / "crosscheck.csv").string());
  return {{"trials", ec.trials},
          {"seed", ec.seed},
          {"mismatches", mismatches},
          {"max_abs_diff", worst},
          {"tolerance", 1e-12},
          {"pass", mismatches == 0}};
}

}  // namespace

const char* to_string(Task task) noexcept {
  switch (task) {
    case Task::JumpAnalysis: return "jump_analysis";
    case Task::SelectionGallery: return "selection_gallery";
    case Task::VariationProfile: return "variation_profile";
    case Task::OperatorStudy: return "operator_study";
    case Task::OracleCrosscheck: return "oracle_crosscheck";
  }
  return "unknown";
}

Task task_from_string(const std::string& name) {
  for (Task t : {Task::JumpAnalysis, Task::SelectionGallery, Task::VariationProfile,
                 Task::OperatorStudy, Task::OracleCrosscheck}) {
    if (name == to_string(t)) return t;
  }
  throw Error(ErrorCode::InvalidInput, "unknown task '" + name + "'");
}

AnalysisConfig apply_overrides(AnalysisConfig cfg, const std::map<std::string, double>& overrides) {
  for (const auto& [key, v] : overrides) {
    if (key == "tie_tol") {
      cfg.tol.tie_tol = v;
    } else if (key == "sample_eps") {
      cfg.tol.sample_eps = v;
    } else if (key == "conv_tol") {
      cfg.tol.conv_tol = v;
    } else if (key == "chain_cap") {
      cfg.chain_cap = static_cast<std::size_t>(v);
    } else if (key == "level_min") {
      cfg.level_min = static_cast<int>(v);
    } else if (key == "level_max") {
      cfg.level_max = static_cast<int>(v);
    } else if (key == "delta_count") {
      cfg.delta_count = static_cast<int>(v);
    } else {
      throw Error(ErrorCode::InvalidInput, "unknown tolerance key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

json point_json(const Point& p) { return json(p.vec()); }

json set_json(const CompactSet& s, std::size_t inline_limit) {
  json j = {{"dim", s.dim()}, {"point_count", s.point_count()}, {"ball_count", s.ball_list().size()}};
  if (s.point_count() <= inline_limit) {
    json pts = json::array();
    for (const Point& p : s.finite_points()) pts.push_back(point_json(p));
    j["points"] = pts;
  }
  json balls = json::array();
  for (const Ball& b : s.ball_list()) {
    balls.push_back({{"center", point_json(b.center)}, {"radius", b.radius}});
  }
  j["balls"] = balls;
  return j;
}

json budget_json(const ToleranceBudget& b) {
  return {{"tie", b.tie},
          {"selection", b.selection},
          {"sampling", b.sampling},
          {"limit", b.limit},
          {"total", b.total()}};
}

json jump_analysis_json(const JumpAnalysis& ja) {
  json failing = json::array();
  for (std::size_t i = 0; i < ja.prop2.pairs.size(); ++i) {
    const PairResidual& p = ja.prop2.pairs[i];
    if (p.pass) continue;
    failing.push_back({{"index", i},
                       {"a", point_json(p.pair.a)},
                       {"b", point_json(p.pair.b)},
                       {"floor", p.floor},
                       {"nonincreasing", p.nonincreasing},
                       {"exact", p.exact}});
  }
  json p2 = {{"pass", ja.prop2.pass},
             {"tolerance", ja.prop2.tolerance},
             {"pair_count", ja.prop2.pairs.size()},
             {"deltas", ja.prop2.deltas},
             {"failing", failing}};
  if (ja.prop2.obstructing) p2["obstructing"] = *ja.prop2.obstructing;

  const SelectionFamily& fam = ja.A_F.family;
  return {
      {"xi", ja.xi},
      {"limits", {{"minus", set_json(ja.F_minus)},
                  {"plus", set_json(ja.F_plus)},
                  {"at", set_json(ja.F_at)},
                  {"analytic", ja.limits_analytic}}},
      {"pairs", {{"count", ja.pairs.size()}}},
      {"A_F", {{"set", set_json(ja.A_F.set)},
               {"family_size", fam.members.size()},
               {"flagged", fam.flagged.size()},
               {"skipped", ja.A_F.skipped},
               {"max_gap", ja.A_F.max_gap},
               {"anchors", {{"at_xi", fam.anchors_at_xi},
                            {"left", fam.anchors_left},
                            {"right", fam.anchors_right},
                            {"straddle", fam.anchors_straddle}}}}},
      {"metric_average", set_json(ja.metric_avg)},
      {"property1", {{"pass", ja.prop1.pass},
                     {"defect", ja.prop1.defect},
                     {"error_bound", ja.prop1.error_bound},
                     {"tolerance", ja.prop1.tolerance},
                     {"witness", point_json(ja.prop1.witness)},
                     {"minus_excess", ja.prop1.minus_excess},
                     {"plus_excess", ja.prop1.plus_excess}}},
      {"property2", p2},
      {"representation", {{"haus_AF_avg", ja.haus_AF_avg},
                          {"avg_in_AF", defect_json(ja.avg_in_AF)},
                          {"AF_in_avg", defect_json(ja.AF_in_avg)},
                          {"gap", ja.theorem_gap},
                          {"budget", budget_json(ja.budget)},
                          {"gap_within_budget", ja.gap_within_budget},
                          {"hypotheses_hold", ja.prop1.pass && ja.prop2.pass}}}};
}

json variation_json(const VariationProfile& v) {
  return {{"total", v.total},
          {"error_bound", v.error_bound},
          {"converged", v.converged},
          {"levels", v.levels},
          {"level_totals", v.level_totals},
          {"grid_size", v.grid.size()}};
}

json study_json(const ConvergenceStudy& s, double tolerance) {
  json rows = json::array();
  for (const StudyRow& r : s.rows) {
    rows.push_back({{"parameter", r.parameter}, {"distance", r.distance}, {"output_size", r.output_size}});
  }
  return {{"x", s.x},
          {"kernel", to_string(s.kind)},
          {"target_is_limit_set", s.target_is_limit_set},
          {"target", set_json(s.target)},
          {"rows", rows},
          {"monotone", s.monotone},
          {"tolerance", tolerance}};
}

ExperimentResult run_experiment(const ExperimentConfig& ec) {
  namespace fs = std::filesystem;
  ExperimentResult res;
  const fs::path dir(ec.out_dir);
  json& r = res.report;
  r["task"] = to_string(ec.task);
  r["spec"] = ec.spec_path;
  r["seed"] = ec.seed;
  std::vector<std::string> files;
  try {
    fs::create_directories(dir);
    AnalysisConfig cfg;
    json body;
    if (ec.task == Task::OracleCrosscheck && ec.spec_path.empty()) {
      cfg = apply_overrides(cfg, ec.overrides);
      if (ec.norm) cfg.norm = *ec.norm;
      r["tolerances"] = tolerances_json(cfg);
      body = run_crosscheck(ec, cfg, dir, files);
    } else {
      const SvfSpec spec = parse_svf_spec(ec.spec_path);
      cfg = apply_overrides(spec.apply(cfg), ec.overrides);
      if (ec.norm) cfg.norm = *ec.norm;
      r["svf"] = {{"name", spec.svf.name()},
                  {"domain", {spec.svf.a(), spec.svf.b()}},
                  {"dim", spec.svf.dim()},
                  {"breakpoints", spec.svf.breakpoints()}};
      r["tolerances"] = tolerances_json(cfg);
      switch (ec.task) {
        case Task::JumpAnalysis:
          body = run_jump(spec.svf, default_xi(spec.svf, ec.xi), cfg, dir, files);
          break;
        case Task::SelectionGallery:
          body = run_gallery(spec.svf, default_xi(spec.svf, ec.xi), cfg, ec.gallery_members, dir,
                             files);
          break;
        case Task::VariationProfile:
          body = run_variation(spec.svf, cfg, dir, files);
          break;
        case Task::OperatorStudy:
          body = run_study(spec.svf, ec, cfg, dir, files);
          break;
        case Task::OracleCrosscheck:
          body = run_crosscheck(ec, cfg, dir, files);
          break;
      }
    }
    r["result"] = body;
    r["status"] = "ok";
  } catch (const NonConvergenceError& e) {
    r["status"] = "error";
    r["error"] = {{"code", to_string(e.code())},
                  {"message", e.what()},
                  {"witness_x", e.witness_x()},
                  {"witness_gap", e.witness_gap()}};
    res.exit_code = 2;
  } catch (const Error& e) {
    r["status"] = "error";
    r["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    res.exit_code = 2;
  } catch (const std::exception& e) {
    r["status"] = "error";
    r["error"] = {{"code", "internal"}, {"message", e.what()}};
    res.exit_code = 3;
  }
  const fs::path report = dir / "report.json";
  std::ofstream out(report);
  if (out) {
    out << r.dump(2) << "\n";
    res.files.push_back(report.string());
  } else {
    res.exit_code = res.exit_code ? res.exit_code : 2;
  }
  res.files.insert(res.files.end(), files.begin(), files.end());
  return res;
}

}  // namespace svfkit
