#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "svfkit/config.hpp"
#include "svfkit/geometry.hpp"
#include "svfkit/limit_analysis.hpp"
#include "svfkit/operators.hpp"
#include "svfkit/variation.hpp"

namespace svfkit {

enum class Task { JumpAnalysis, SelectionGallery, VariationProfile, OperatorStudy, OracleCrosscheck };

const char* to_string(Task task) noexcept;
Task task_from_string(const std::string& name);

struct ExperimentConfig {
  Task task = Task::JumpAnalysis;
  std::string spec_path;
  std::optional<double> xi;  // default: first declared breakpoint
  std::string out_dir = ".";
  std::optional<NormKind> norm;
  // Keys: tie_tol, sample_eps, conv_tol, chain_cap, level_min, level_max, delta_count.
  std::map<std::string, double> overrides;
  std::uint64_t seed = 1;
  std::string kernel = "fejer";   // operator_study: fejer | window
  std::vector<double> schedule;   // operator_study orders or windows
  int trials = 200;               // oracle_crosscheck
  std::size_t gallery_members = 64;
};

struct ExperimentResult {
  int exit_code = 0;
  nlohmann::json report;
  std::vector<std::string> files;  // written paths, report.json first
};

// Parses the SVF description, runs the task and writes report.json plus the task's CSV
// files into out_dir. Module errors are caught and serialized into the report
// as {"code", "message"} with a nonzero exit code.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Applies ExperimentConfig-style overrides; unknown keys throw InvalidInput.
AnalysisConfig apply_overrides(AnalysisConfig cfg, const std::map<std::string, double>& overrides);

nlohmann::json point_json(const Point& p);
nlohmann::json set_json(const CompactSet& s, std::size_t inline_limit = 64);
nlohmann::json budget_json(const ToleranceBudget& b);
nlohmann::json jump_analysis_json(const JumpAnalysis& ja);
nlohmann::json variation_json(const VariationProfile& v);
nlohmann::json study_json(const ConvergenceStudy& s, double tolerance);

}  // namespace svfkit
