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

#ifndef SFLGAME_SCENARIO_H_
#define SFLGAME_SCENARIO_H_

// Declarative experiment files and the runner that turns them into CSV.
//
// A scenario fixes the system constants, the clients and the cost model,
// picks a mode, and optionally sweeps one variable (and an outer one):
//
//   mode        sweepable variables   columns after the sweep columns
//   ne          R, N, l_c             d1..dK, eta, U1..UK
//   stackelberg N, tau_ratio          N, R_star, L_c_star, U_MO, eta,
//                                     d1..dK, U1..UK (N only when N is
//                                     not swept)
//   poa         R, N, l_c             welfare_opt, welfare_ne, poa
//   fit         none                  a, b, c, d, rmse_flops, rmse_params,
//                                     n_samples
//   privacy     none                  l_c, sigma, accuracy, ssim
//
// K is the largest client count in the sweep; absent entries are empty.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sflgame/model.h"

namespace sflgame {

enum class Mode { kNe, kStackelberg, kPoa, kFit, kPrivacy };
enum class SweepVariable { kR, kN, kLc, kTauRatio };

struct Sweep {
  SweepVariable variable = SweepVariable::kR;
  std::vector<double> values;
};

struct Scenario {
  std::string name;
  std::string description;
  Mode mode = Mode::kNe;
  SystemParams system;
  CutCostModel cost_model;
  ClientProfile client_template;
  std::vector<ClientProfile> clients;  // resolved, template applied
  bool homogeneous = true;             // no per-client overrides
  double r = 200.0;                    // fixed incentive for ne / poa
  double l_c = 3.0;                    // fixed cut for ne / poa
  bool integer_r = false;              // stackelberg: round R* to an integer
  // tau_ratio sweeps hold this weight and derive the other.
  bool tau_ratio_holds_tau1 = false;
  std::optional<Sweep> sweep;
  std::optional<Sweep> outer;
  std::filesystem::path samples;  // fit mode
  std::filesystem::path table;    // privacy mode; empty means built in
};

// Throws Error(kInvalidArgument) naming the offending field. Relative file
// references resolve against `base_dir`.
Scenario parse_scenario(std::string_view text,
                        const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

struct ResultTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

// Evaluates every sweep point; with jobs > 1 points run concurrently. Row
// order always follows the sweep order.
ResultTable run_scenario(const Scenario& scenario, int jobs = 1);

void write_csv(const ResultTable& table, std::ostream& out);

std::string_view ModeName(Mode mode);
std::string_view SweepVariableName(SweepVariable variable);

// Scenario names (file stems of *.toml) across `dirs`, sorted and
// de-duplicated. Throws kInvalidArgument if a directory does not exist.
std::vector<std::string> list_scenarios(
    const std::vector<std::filesystem::path>& dirs);

// First `dirs` entry holding `<name>.toml`, or nullopt.
std::optional<std::filesystem::path> find_scenario(
    const std::string& name, const std::vector<std::filesystem::path>& dirs);

}  // namespace sflgame

#endif  // SFLGAME_SCENARIO_H_
