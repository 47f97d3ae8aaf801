#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "svfkit/experiment.hpp"

using namespace svfkit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("svfkit_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig config(Task task, const std::string& fixture, const fs::path& out) {
  ExperimentConfig ec;
  ec.task = task;
  ec.spec_path = fixture.empty() ? "" : oracle::fixture_path(fixture);
  ec.out_dir = out.string();
  return ec;
}

}  // namespace

TEST(Experiment, TildeJumpReport) {
  const auto res = run_experiment(config(Task::JumpAnalysis, "finite_G_tilde", scratch("gt")));
  ASSERT_EQ(res.exit_code, 0) << res.report.dump();
  const auto& rep = res.report["result"]["representation"];
  EXPECT_LE(rep["gap"].get<double>(), 1e-9);
  EXPECT_TRUE(rep["gap_within_budget"].get<bool>());
  EXPECT_TRUE(rep.contains("budget"));
  EXPECT_EQ(res.files.size(), 5u);
  const std::string csv = slurp(res.files[1]);
  EXPECT_EQ(csv.rfind("# count=", 0), 0u);
}

TEST(Experiment, DiscJumpReportsDefect) {
  ExperimentConfig ec = config(Task::JumpAnalysis, "discs_F", scratch("fd"));
  ec.overrides["sample_eps"] = 0.05;
  const auto res = run_experiment(ec);
  ASSERT_EQ(res.exit_code, 0);
  const auto& p1 = res.report["result"]["property1"];
  EXPECT_FALSE(p1["pass"].get<bool>());
  EXPECT_NEAR(p1["defect"].get<double>(), 1.8284271247461903, 1e-9);
  EXPECT_TRUE(p1.contains("tolerance"));
}

TEST(Experiment, ConstantVariationIsZero) {
  const auto res = run_experiment(config(Task::VariationProfile, "constant", scratch("cv")));
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.report["result"]["total"].get<double>(), 0.0);
}

TEST(Experiment, ReportsAreByteIdentical) {
  for (Task t : {Task::JumpAnalysis, Task::SelectionGallery, Task::OperatorStudy, Task::OracleCrosscheck}) {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    ExperimentConfig ea = config(t, t == Task::OracleCrosscheck ? "" : "finite_G", a);
    ExperimentConfig eb = ea;
    eb.out_dir = b.string();
    ea.seed = eb.seed = 99;
    const auto ra = run_experiment(ea);
    const auto rb = run_experiment(eb);
    ASSERT_EQ(ra.exit_code, 0) << ra.report.dump();
    ASSERT_EQ(ra.files.size(), rb.files.size());
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
      EXPECT_EQ(slurp(ra.files[i]), slurp(rb.files[i])) << ra.files[i];
    }
  }
}

TEST(Experiment, ErrorsAreSerialized) {
  const fs::path out = scratch("err");
  ExperimentConfig ec = config(Task::JumpAnalysis, "finite_G", out);
  ec.xi = 0.0;
  const auto res = run_experiment(ec);
  EXPECT_NE(res.exit_code, 0);
  EXPECT_EQ(res.report["status"], "error");
  EXPECT_EQ(res.report["error"]["code"], "out_of_domain");
  EXPECT_TRUE(fs::exists(out / "report.json"));

  ExperimentConfig bad = config(Task::JumpAnalysis, "", scratch("err2"));
  bad.spec_path = "/nonexistent/spec.json";
  const auto r2 = run_experiment(bad);
  EXPECT_EQ(r2.report["error"]["code"], "parse_error");

  ExperimentConfig tol = config(Task::VariationProfile, "constant", scratch("err3"));
  tol.overrides["bogus"] = 1.0;
  EXPECT_EQ(run_experiment(tol).report["error"]["code"], "invalid_input");
}

TEST(Experiment, CrosscheckHasNoMismatches) {
  ExperimentConfig ec = config(Task::OracleCrosscheck, "", scratch("cc"));
  ec.trials = 50;
  const auto res = run_experiment(ec);
  ASSERT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.report["result"]["mismatches"].get<int>(), 0);
}

TEST(Experiment, TaskNamesRoundTrip) {
  for (Task t : {Task::JumpAnalysis, Task::SelectionGallery, Task::VariationProfile, Task::OperatorStudy,
                 Task::OracleCrosscheck}) {
    EXPECT_EQ(task_from_string(to_string(t)), t);
  }
  EXPECT_THROW(task_from_string("nope"), std::exception);
}
