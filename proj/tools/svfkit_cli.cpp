#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svfkit/error.hpp"
#include "svfkit/experiment.hpp"

namespace {

void add_common(CLI::App* sub, svfkit::ExperimentConfig& ec, std::vector<std::string>& tols,
                std::string& norm, bool needs_spec) {
  auto* spec = sub->add_option("--spec", ec.spec_path, "SVF description (JSON)");
  if (needs_spec) spec->required()->check(CLI::ExistingFile);
  sub->add_option("--out", ec.out_dir, "Output directory")->required();
  sub->add_option("--norm", norm, "Norm override: l1 | l2 | linf");
  sub->add_option("--tol", tols, "Override key=value (tie_tol, sample_eps, conv_tol, chain_cap, "
                                 "level_min, level_max, delta_count)");
  sub->add_option("--seed", ec.seed, "Seed for randomized tasks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of set-valued functions of bounded variation"};
  app.require_subcommand(1);

  svfkit::ExperimentConfig ec;
  std::vector<std::string> tols;
  std::string norm;
  double xi = 0.0;

  struct Sub {
    svfkit::Task task;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {svfkit::Task::JumpAnalysis, "A_F, metric average, Property 1/2 and the representation gap at xi"},
      {svfkit::Task::SelectionGallery, "Metric selections through the family anchors at xi"},
      {svfkit::Task::VariationProfile, "Variation function v_F and total variation"},
      {svfkit::Task::OperatorStudy, "Metric integral operator convergence at x"},
      {svfkit::Task::OracleCrosscheck, "Hausdorff distance against brute force on random sets"},
  };
  std::map<CLI::App*, svfkit::Task> tasks;
  std::string kernel = "fejer";
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(svfkit::to_string(s.task), s.help);
    tasks[sub] = s.task;
    add_common(sub, ec, tols, norm, s.task != svfkit::Task::OracleCrosscheck);
    if (s.task != svfkit::Task::VariationProfile && s.task != svfkit::Task::OracleCrosscheck) {
      sub->add_option("--xi", xi, "Point of analysis (default: first declared breakpoint)");
    }
    if (s.task == svfkit::Task::SelectionGallery) {
      sub->add_option("--max-members", ec.gallery_members, "Members written to gallery.csv");
    }
    if (s.task == svfkit::Task::OperatorStudy) {
      sub->add_option("--kernel", kernel, "fejer | window")->check(CLI::IsMember({"fejer", "window"}));
      sub->add_option("--schedule", ec.schedule, "Kernel orders (fejer) or window widths");
    }
    if (s.task == svfkit::Task::OracleCrosscheck) {
      sub->add_option("--trials", ec.trials, "Random set pairs")->check(CLI::PositiveNumber);
    }
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [sub, task] : tasks) {
    if (!sub->parsed()) continue;
    ec.task = task;
    if (sub->get_option_no_throw("--xi") && sub->count("--xi") > 0) ec.xi = xi;
  }
  ec.kernel = kernel;
  try {
    if (!norm.empty()) ec.norm = svfkit::norm_from_string(norm);
    for (const std::string& t : tols) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw svfkit::Error(svfkit::ErrorCode::InvalidInput, "--tol expects key=value, got '" + t + "'");
      }
      ec.overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const svfkit::ExperimentResult res = svfkit::run_experiment(ec);
  if (res.exit_code != 0) {
    const auto& err = res.report["error"];
    std::cerr << "error [" << err.value("code", std::string("unknown")) << "]: "
              << err.value("message", std::string()) << "\n";
  }
  for (const std::string& f : res.files) std::cout << f << "\n";
  return res.exit_code;
}
