// Copyright 2026 The sflgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
//   sflgame run <config|name> [--out FILE] [--jobs K] [--dir DIR]...
//   sflgame list [--dir DIR]...
//   sflgame fit <samples.csv>
//   sflgame privacy --threshold X --sigma Y [--table FILE]
//
// Exit status: 0 on success, 2 for configuration or input errors, 3 when a
// solver fails.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sflgame/csv.h"
#include "sflgame/error.h"
#include "sflgame/privacy.h"
#include "sflgame/regression.h"
#include "sflgame/scenario.h"

namespace {

namespace fs = std::filesystem;
using sflgame::Error;
using sflgame::ErrorCode;

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoParticipation:
    case ErrorCode::kNonConvergence:
    case ErrorCode::kNonInteriorRegime:
    case ErrorCode::kNonPositiveWelfare:
    case ErrorCode::kZeroAggregate:
    case ErrorCode::kNoQualifyingCut:
      return kSolverError;
    default:
      return kConfigError;
  }
}

// Built-in directory first, then SFLGAME_SCENARIO_DIR (':'-separated), then
// --dir flags. The built-in directory is skipped if it is not present.
std::vector<fs::path> ScenarioDirs(const std::vector<std::string>& extra) {
  std::vector<fs::path> dirs;
  std::error_code ec;
  if (fs::is_directory(SFLGAME_SCENARIO_DIR, ec)) {
    dirs.emplace_back(SFLGAME_SCENARIO_DIR);
  }
  if (const char* env = std::getenv("SFLGAME_SCENARIO_DIR")) {
    std::string list = env;
    std::size_t start = 0;
    while (start <= list.size()) {
      const std::size_t colon = list.find(':', start);
      const std::string item = list.substr(start, colon - start);
      if (!item.empty()) dirs.emplace_back(item);
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
  }
  for (const auto& d : extra) dirs.emplace_back(d);
  return dirs;
}

int Run(const std::string& target, const std::string& out_path, int jobs,
        const std::vector<std::string>& extra_dirs) {
  fs::path path = target;
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    const auto found = sflgame::find_scenario(target, ScenarioDirs(extra_dirs));
    if (!found) {
      std::cerr << "sflgame: no config file or bundled scenario named '"
                << target << "'\n";
      return kConfigError;
    }
    path = *found;
  }
  const sflgame::Scenario scenario = sflgame::load_scenario(path);
  const sflgame::ResultTable table = sflgame::run_scenario(scenario, jobs);
  if (out_path.empty()) {
    sflgame::write_csv(table, std::cout);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "sflgame: cannot write '" << out_path << "'\n";
    return kConfigError;
  }
  sflgame::write_csv(table, out);
  return 0;
}

int List(const std::vector<std::string>& extra_dirs) {
  for (const auto& name : sflgame::list_scenarios(ScenarioDirs(extra_dirs))) {
    std::cout << name << '\n';
  }
  return 0;
}

int Fit(const std::string& samples_path) {
  const sflgame::FitReport fit = sflgame::fit_cost_model(
      sflgame::read_profile_csv_file(samples_path));
  using sflgame::csv::FormatNumber;
  std::cout << "a,b,c,d,rmse_flops,rmse_params,n_samples\n"
            << FormatNumber(fit.model.flops_slope) << ','
            << FormatNumber(fit.model.flops_intercept) << ','
            << FormatNumber(fit.model.params_scale) << ','
            << FormatNumber(fit.model.params_rate) << ','
            << FormatNumber(fit.rmse_flops) << ','
            << FormatNumber(fit.rmse_params) << ',' << fit.n_samples << '\n';
  return 0;
}

int Privacy(double threshold, double sigma, const std::string& table_path) {
  const sflgame::PrivacyTable table =
      table_path.empty() ? sflgame::PrivacyTable::Builtin()
                         : sflgame::PrivacyTable::FromCsvFile(table_path);
  const int l_c = table.recommend_min_cut(threshold, sigma);
  const sflgame::PrivacyRecord& r = table.lookup(l_c, sigma);
  using sflgame::csv::FormatNumber;
  std::cout << "threshold,sigma,l_c,ssim,accuracy\n"
            << FormatNumber(threshold) << ',' << FormatNumber(sigma) << ','
            << l_c << ',' << FormatNumber(r.ssim) << ','
            << FormatNumber(r.accuracy) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incentive and cut-layer games for split federated learning"};
  app.require_subcommand(1);

  std::string target, out_path;
  int jobs = 1;
  std::vector<std::string> run_dirs;
  CLI::App* run = app.add_subcommand("run", "Evaluate a scenario to CSV");
  run->add_option("config", target, "Config file or bundled scenario name")
      ->required();
  run->add_option("--out", out_path, "Write CSV here instead of stdout");
  run->add_option("--jobs", jobs, "Sweep points evaluated concurrently")
      ->check(CLI::PositiveNumber);
  run->add_option("--dir", run_dirs, "Extra scenario directory");

  std::vector<std::string> list_dirs;
  CLI::App* list = app.add_subcommand("list", "List available scenarios");
  list->add_option("--dir", list_dirs, "Extra scenario directory");

  std::string samples;
  CLI::App* fit = app.add_subcommand("fit", "Fit the cut-layer cost model");
  fit->add_option("samples", samples, "CSV with l_c,gflops,mparams")
      ->required();

  double threshold = 0.0, sigma = 0.0;
  std::string table_path;
  CLI::App* privacy =
      app.add_subcommand("privacy", "Smallest cut layer meeting an SSIM bound");
  privacy->add_option("--threshold", threshold, "Largest acceptable SSIM")
      ->required();
  privacy->add_option("--sigma", sigma, "Noise standard deviation")
      ->required();
  privacy->add_option("--table", table_path, "CSV l_c,sigma,accuracy,ssim");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return Run(target, out_path, jobs, run_dirs);
    if (*list) return List(list_dirs);
    if (*fit) return Fit(samples);
    if (*privacy) return Privacy(threshold, sigma, table_path);
  } catch (const Error& e) {
    std::cerr << "sflgame: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "sflgame: " << e.what() << '\n';
    return kSolverError;
  }
  return kConfigError;
}
