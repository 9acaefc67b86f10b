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

#include "sflgame/scenario.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "sflgame/config.h"
#include "sflgame/csv.h"
#include "sflgame/error.h"
#include "sflgame/follower.h"
#include "sflgame/leader.h"
#include "sflgame/privacy.h"
#include "sflgame/regression.h"
#include "sflgame/welfare.h"

namespace sflgame {
namespace {

using config::Dimension;
using config::Value;

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidArgument, message);
}

// Reads typed fields from one config table and rejects unknown keys.
class Fields {
 public:
  Fields(const config::Table& table, std::string prefix)
      : table_(table), prefix_(std::move(prefix)) {}

  const Value* Get(std::string_view key) {
    used_.insert(std::string(key));
    return table_.Find(key);
  }

  std::string Path(std::string_view key) const {
    return prefix_.empty() ? std::string(key)
                           : prefix_ + "." + std::string(key);
  }

  void Number(std::string_view key, double& out,
              Dimension dim = Dimension::kNone) {
    if (const Value* v = Get(key)) out = config::Quantity(*v, dim, Path(key));
  }

  void Integer(std::string_view key, int& out) {
    double value = out;
    Number(key, value);
    if (value != std::floor(value) || std::abs(value) > 1e9) {
      Invalid(Path(key) + ": expected an integer");
    }
    out = static_cast<int>(value);
  }

  void Text(std::string_view key, std::string& out) {
    const Value* v = Get(key);
    if (!v) return;
    if (v->kind != Value::Kind::kString) {
      Invalid(Path(key) + ": expected a string");
    }
    out = v->text;
  }

  void Bool(std::string_view key, bool& out) {
    const Value* v = Get(key);
    if (!v) return;
    if (v->kind != Value::Kind::kBool) {
      Invalid(Path(key) + ": expected true or false");
    }
    out = v->boolean;
  }

  std::vector<double> Numbers(std::string_view key) {
    const Value* v = Get(key);
    if (!v) return {};
    if (v->kind != Value::Kind::kArray) {
      Invalid(Path(key) + ": expected an array");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v->items.size(); ++i) {
      out.push_back(config::Quantity(
          v->items[i], Dimension::kNone,
          Path(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  void Finish() const {
    for (const auto& [key, value] : table_.entries) {
      if (!used_.count(key)) Invalid("unknown field '" + Path(key) + "'");
    }
  }

 private:
  const config::Table& table_;
  std::string prefix_;
  std::set<std::string> used_;
};

const config::Table* SubTable(Fields& root, std::string_view key) {
  const Value* v = root.Get(key);
  if (!v) return nullptr;
  if (v->kind != Value::Kind::kTable) {
    Invalid(std::string(key) + ": expected a [" + std::string(key) +
            "] table");
  }
  return v->table.get();
}

void ReadSystem(const config::Table& table, SystemParams& p) {
  Fields f(table, "system");
  f.Integer("minibatches", p.minibatches);
  f.Integer("epochs", p.epochs);
  f.Integer("rounds", p.rounds);
  f.Number("d_req", p.d_req);
  f.Number("bits_per_param", p.bits_per_param);
  f.Number("smashed_bits", p.smashed_bits, Dimension::kBits);
  f.Number("gradient_bits", p.gradient_bits, Dimension::kBits);
  f.Number("full_model_gflops", p.full_model_gflops, Dimension::kGflops);
  f.Number("computing_intensity", p.computing_intensity);
  f.Number("tau1", p.tau1);
  f.Number("tau2", p.tau2);
  f.Number("r_min", p.r_min);
  f.Number("r_max", p.r_max);
  f.Integer("l_min", p.l_min);
  f.Integer("l_max", p.l_max);
  f.Finish();
}

void ReadCostModel(const config::Table& table, CutCostModel& m) {
  Fields f(table, "cost_model");
  f.Number("flops_slope", m.flops_slope);
  f.Number("flops_intercept", m.flops_intercept);
  f.Number("params_scale", m.params_scale);
  f.Number("params_rate", m.params_rate);
  f.Finish();
}

void ReadClientFields(Fields& f, ClientProfile& c) {
  f.Number("cpu_freq", c.cpu_freq, Dimension::kFrequency);
  f.Number("psi", c.psi);
  f.Number("dataset_cap", c.dataset_cap);
  f.Number("p_compute", c.p_compute, Dimension::kPower);
  f.Number("p_tx", c.p_tx, Dimension::kPower);
  f.Number("p_rx", c.p_rx, Dimension::kPower);
  f.Number("rate_up_main", c.rate_up_main, Dimension::kRate);
  f.Number("rate_down_main", c.rate_down_main, Dimension::kRate);
  f.Number("rate_up_fed", c.rate_up_fed, Dimension::kRate);
  f.Number("rate_down_fed", c.rate_down_fed, Dimension::kRate);
  f.Number("offset", c.offset);
}

Mode ParseMode(const std::string& name) {
  if (name == "ne") return Mode::kNe;
  if (name == "stackelberg") return Mode::kStackelberg;
  if (name == "poa") return Mode::kPoa;
  if (name == "fit") return Mode::kFit;
  if (name == "privacy") return Mode::kPrivacy;
  Invalid("mode: unknown mode '" + name +
          "' (expected ne, stackelberg, poa, fit or privacy)");
}

SweepVariable ParseVariable(const std::string& name, const std::string& path) {
  if (name == "R") return SweepVariable::kR;
  if (name == "N") return SweepVariable::kN;
  if (name == "l_c") return SweepVariable::kLc;
  if (name == "tau_ratio") return SweepVariable::kTauRatio;
  Invalid(path + ": unknown sweep variable '" + name +
          "' (expected R, N, l_c or tau_ratio)");
}

bool Sweepable(Mode mode, SweepVariable v) {
  switch (mode) {
    case Mode::kNe:
    case Mode::kPoa:
      return v != SweepVariable::kTauRatio;
    case Mode::kStackelberg:
      return v == SweepVariable::kN || v == SweepVariable::kTauRatio;
    case Mode::kFit:
    case Mode::kPrivacy:
      return false;
  }
  return false;
}

void CheckSweep(const Scenario& s, const Sweep& sweep,
                const std::string& path) {
  const std::string name(SweepVariableName(sweep.variable));
  if (!Sweepable(s.mode, sweep.variable)) {
    Invalid(path + ": cannot sweep " + name + " in mode " +
            std::string(ModeName(s.mode)));
  }
  if (sweep.values.empty()) Invalid(path + ": sweep values are empty");
  if (!std::is_sorted(sweep.values.begin(), sweep.values.end())) {
    Invalid(path + ": sweep values must be sorted ascending");
  }
  for (const double v : sweep.values) {
    const std::string where = path + ": " + name + "=" + csv::FormatNumber(v);
    switch (sweep.variable) {
      case SweepVariable::kR:
        if (!(v > 0)) Invalid(where + " must be positive");
        break;
      case SweepVariable::kN:
        if (v != std::floor(v) || v < 2 || v > 100000) {
          Invalid(where + " must be an integer >= 2");
        }
        if (!s.homogeneous) {
          Invalid(path + ": an N sweep needs homogeneous clients (no "
                         "[[clients]] entries)");
        }
        break;
      case SweepVariable::kLc:
        if (v < s.system.l_min || v > s.system.l_max) {
          Invalid(where + " outside [l_min, l_max]");
        }
        break;
      case SweepVariable::kTauRatio:
        if (!(v > 0) || !std::isfinite(v)) Invalid(where + " must be positive");
        break;
    }
  }
}

std::optional<Sweep> ReadSweep(Fields& f, const char* var_key,
                               const char* values_key) {
  std::string name;
  f.Text(var_key, name);
  std::vector<double> values = f.Numbers(values_key);
  const bool has_values = f.Get(values_key) != nullptr;
  if (name.empty()) {
    if (has_values) {
      Invalid(f.Path(values_key) + ": given without " + f.Path(var_key));
    }
    return std::nullopt;
  }
  Sweep sweep;
  sweep.variable = ParseVariable(name, f.Path(var_key));
  sweep.values = std::move(values);
  return sweep;
}

// A resolved sweep point applied to a copy of the scenario.
struct Point {
  std::optional<double> outer;
  std::optional<double> inner;
};

void Apply(SweepVariable v, double value, Scenario& s) {
  switch (v) {
    case SweepVariable::kR:
      s.r = value;
      break;
    case SweepVariable::kN:
      s.clients.assign(static_cast<std::size_t>(value), s.client_template);
      break;
    case SweepVariable::kLc:
      s.l_c = value;
      break;
    case SweepVariable::kTauRatio:
      if (s.tau_ratio_holds_tau1) {
        s.system.tau2 = s.system.tau1 / value;
      } else {
        s.system.tau1 = value * s.system.tau2;
      }
      break;
  }
  s.system.n_clients = static_cast<int>(s.clients.size());
}

using Row = std::vector<std::optional<double>>;

void AppendProfile(Row& row, std::size_t width, const std::vector<double>& d,
                   double eta, const std::vector<double>& u) {
  for (std::size_t n = 0; n < width; ++n) {
    row.push_back(n < d.size() ? std::optional<double>(d[n]) : std::nullopt);
  }
  row.push_back(eta);
  for (std::size_t n = 0; n < width; ++n) {
    row.push_back(n < u.size() ? std::optional<double>(u[n]) : std::nullopt);
  }
}

bool SweepsN(const Scenario& s) {
  return (s.sweep && s.sweep->variable == SweepVariable::kN) ||
         (s.outer && s.outer->variable == SweepVariable::kN);
}

Row Evaluate(const Scenario& s, std::size_t width) {
  Row row;
  switch (s.mode) {
    case Mode::kNe: {
      const FollowerProblem game = FollowerProblem::FromModel(
          s.system, s.clients, s.cost_model, s.r, s.l_c);
      const NashOutcome ne = closed_form_ne(game);
      AppendProfile(row, width, ne.d_star, ne.eta, ne.utilities);
      break;
    }
    case Mode::kStackelberg: {
      const LeaderProblem leader{s.system, s.clients, s.cost_model};
      StackelbergOutcome se = stackelberg_search(leader);
      if (s.integer_r) {
        const IncentiveChoice rounded =
            round_incentive(leader, se.l_c_star, se.r_star);
        se.r_star = rounded.r_star;
        se.u_mo = rounded.u_mo;
        se.induced = closed_form_ne(leader.Follower(se.r_star, se.l_c_star));
      }
      if (!SweepsN(s)) row.push_back(static_cast<double>(s.clients.size()));
      row.push_back(se.r_star);
      row.push_back(static_cast<double>(se.l_c_star));
      row.push_back(se.u_mo);
      AppendProfile(row, width, se.induced.d_star, se.induced.eta,
                    se.induced.utilities);
      break;
    }
    case Mode::kPoa: {
      const FollowerProblem game = FollowerProblem::FromModel(
          s.system, s.clients, s.cost_model, s.r, s.l_c);
      const PoAReport report =
          price_of_anarchy(WelfareProblem::FromGame(game));
      row = {report.welfare_opt, report.welfare_ne, report.poa};
      break;
    }
    case Mode::kFit:
    case Mode::kPrivacy:
      break;
  }
  return row;
}

std::vector<std::string> ModeColumns(Mode mode, std::size_t width,
                                     bool with_n = true) {
  std::vector<std::string> cols;
  const auto profile = [&] {
    for (std::size_t n = 1; n <= width; ++n) cols.push_back("d" + std::to_string(n));
    cols.push_back("eta");
    for (std::size_t n = 1; n <= width; ++n) cols.push_back("U" + std::to_string(n));
  };
  switch (mode) {
    case Mode::kNe:
      profile();
      break;
    case Mode::kStackelberg:
      if (with_n) cols.push_back("N");
      for (const char* c : {"R_star", "L_c_star", "U_MO"}) cols.push_back(c);
      profile();
      break;
    case Mode::kPoa:
      cols = {"welfare_opt", "welfare_ne", "poa"};
      break;
    case Mode::kFit:
      cols = {"a", "b", "c", "d", "rmse_flops", "rmse_params", "n_samples"};
      break;
    case Mode::kPrivacy:
      cols = {"l_c", "sigma", "accuracy", "ssim"};
      break;
  }
  return cols;
}

}  // namespace

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kNe: return "ne";
    case Mode::kStackelberg: return "stackelberg";
    case Mode::kPoa: return "poa";
    case Mode::kFit: return "fit";
    case Mode::kPrivacy: return "privacy";
  }
  return "unknown";
}

std::string_view SweepVariableName(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::kR: return "R";
    case SweepVariable::kN: return "N";
    case SweepVariable::kLc: return "l_c";
    case SweepVariable::kTauRatio: return "tau_ratio";
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view text,
                        const std::filesystem::path& base_dir) {
  const config::Table doc = config::Parse(text);
  Fields root(doc, "");
  Scenario s;
  root.Text("name", s.name);
  root.Text("description", s.description);
  std::string mode;
  root.Text("mode", mode);
  if (mode.empty()) Invalid("mode: required");
  s.mode = ParseMode(mode);

  if (const config::Table* t = SubTable(root, "system")) {
    ReadSystem(*t, s.system);
  }
  if (const config::Table* t = SubTable(root, "cost_model")) {
    ReadCostModel(*t, s.cost_model);
  }
  if (const config::Table* t = SubTable(root, "game")) {
    Fields f(*t, "game");
    f.Number("r", s.r);
    f.Number("l_c", s.l_c);
    f.Bool("integer_r", s.integer_r);
    f.Finish();
  }

  int count = s.system.n_clients;
  if (const config::Table* t = SubTable(root, "client_template")) {
    Fields f(*t, "client_template");
    f.Integer("count", count);
    ReadClientFields(f, s.client_template);
    f.Finish();
  }
  if (const Value* list = root.Get("clients")) {
    if (list->kind != Value::Kind::kArray) {
      Invalid("clients: expected [[clients]] entries");
    }
    s.homogeneous = false;
    for (std::size_t i = 0; i < list->items.size(); ++i) {
      const Value& item = list->items[i];
      const std::string path = "clients[" + std::to_string(i) + "]";
      if (item.kind != Value::Kind::kTable) Invalid(path + ": expected a table");
      ClientProfile c = s.client_template;
      Fields f(*item.table, path);
      ReadClientFields(f, c);
      f.Finish();
      s.clients.push_back(c);
    }
  } else {
    if (count < 2) Invalid("client_template.count: need at least 2 clients");
    s.clients.assign(static_cast<std::size_t>(count), s.client_template);
  }
  s.system.n_clients = static_cast<int>(s.clients.size());

  if (const config::Table* t = SubTable(root, "sweep")) {
    Fields f(*t, "sweep");
    s.sweep = ReadSweep(f, "variable", "values");
    s.outer = ReadSweep(f, "outer_variable", "outer_values");
    std::string holds = "tau2";
    f.Text("tau_ratio_holds", holds);
    if (holds != "tau1" && holds != "tau2") {
      Invalid("sweep.tau_ratio_holds: expected \"tau1\" or \"tau2\"");
    }
    s.tau_ratio_holds_tau1 = holds == "tau1";
    f.Finish();
    if (s.outer && !s.sweep) {
      Invalid("sweep.outer_variable: needs sweep.variable as well");
    }
  }
  if (const config::Table* t = SubTable(root, "fit")) {
    Fields f(*t, "fit");
    std::string samples;
    f.Text("samples", samples);
    if (!samples.empty()) s.samples = base_dir / samples;
    f.Finish();
  }
  if (const config::Table* t = SubTable(root, "privacy")) {
    Fields f(*t, "privacy");
    std::string table;
    f.Text("table", table);
    if (!table.empty()) s.table = base_dir / table;
    f.Finish();
  }
  root.Finish();

  // Validation of everything a run will touch, so that config mistakes
  // surface before any solver starts.
  s.system.Validate();
  s.cost_model.Validate(s.system.l_min, s.system.l_max);
  for (const ClientProfile& c : s.clients) c.Validate();
  if (s.sweep) CheckSweep(s, *s.sweep, "sweep.values");
  if (s.outer) {
    CheckSweep(s, *s.outer, "sweep.outer_values");
    if (s.outer->variable == s.sweep->variable) {
      Invalid("sweep.outer_variable: must differ from sweep.variable");
    }
  }
  switch (s.mode) {
    case Mode::kNe:
    case Mode::kPoa:
      if (!(s.r > 0)) Invalid("game.r: must be positive");
      if (s.l_c < s.system.l_min || s.l_c > s.system.l_max) {
        Invalid("game.l_c: outside [l_min, l_max]");
      }
      break;
    case Mode::kFit:
      if (s.samples.empty()) Invalid("fit.samples: required in fit mode");
      break;
    case Mode::kStackelberg:
    case Mode::kPrivacy:
      break;
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Invalid("cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  Scenario s = parse_scenario(text.str(), path.parent_path());
  if (s.name.empty()) s.name = path.stem().string();
  return s;
}

ResultTable run_scenario(const Scenario& scenario, int jobs) {
  ResultTable result;
  if (scenario.mode == Mode::kFit) {
    const FitReport fit =
        fit_cost_model(read_profile_csv_file(scenario.samples.string()));
    result.header = ModeColumns(Mode::kFit, 0);
    result.rows.push_back({fit.model.flops_slope, fit.model.flops_intercept,
                           fit.model.params_scale, fit.model.params_rate,
                           fit.rmse_flops, fit.rmse_params,
                           static_cast<double>(fit.n_samples)});
    return result;
  }
  if (scenario.mode == Mode::kPrivacy) {
    const PrivacyTable table =
        scenario.table.empty()
            ? PrivacyTable::Builtin()
            : PrivacyTable::FromCsvFile(scenario.table.string());
    result.header = ModeColumns(Mode::kPrivacy, 0);
    for (const PrivacyRecord& r : table.records()) {
      result.rows.push_back(
          {static_cast<double>(r.l_c), r.sigma, r.accuracy, r.ssim});
    }
    return result;
  }

  std::vector<Point> points;
  const std::vector<double> none = {0.0};
  const auto& outer_values = scenario.outer ? scenario.outer->values : none;
  const auto& inner_values = scenario.sweep ? scenario.sweep->values : none;
  for (const double o : outer_values) {
    for (const double i : inner_values) {
      Point p;
      if (scenario.outer) p.outer = o;
      if (scenario.sweep) p.inner = i;
      points.push_back(p);
    }
  }

  std::size_t width = scenario.clients.size();
  for (const Sweep* sw : {scenario.sweep ? &*scenario.sweep : nullptr,
                          scenario.outer ? &*scenario.outer : nullptr}) {
    if (sw && sw->variable == SweepVariable::kN) {
      width = static_cast<std::size_t>(sw->values.back());
    }
  }

  if (scenario.outer) {
    result.header.emplace_back(SweepVariableName(scenario.outer->variable));
  }
  if (scenario.sweep) {
    result.header.emplace_back(SweepVariableName(scenario.sweep->variable));
  }
  for (std::string& c : ModeColumns(scenario.mode, width, !SweepsN(scenario))) {
    result.header.push_back(std::move(c));
  }

  result.rows.resize(points.size());
  std::vector<std::exception_ptr> failures(points.size());
  const auto solve = [&](std::size_t k) {
    try {
      Scenario local = scenario;
      Row row;
      if (points[k].outer) {
        Apply(scenario.outer->variable, *points[k].outer, local);
        row.push_back(*points[k].outer);
      }
      if (points[k].inner) {
        Apply(scenario.sweep->variable, *points[k].inner, local);
        row.push_back(*points[k].inner);
      }
      for (auto& cell : Evaluate(local, width)) row.push_back(cell);
      result.rows[k] = std::move(row);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(jobs < 1 ? 1 : jobs, 1, points.size());
  if (workers == 1) {
    for (std::size_t k = 0; k < points.size(); ++k) solve(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < points.size(); k = next++) solve(k);
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return result;
}

void write_csv(const ResultTable& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i]) out << csv::FormatNumber(*row[i]);
    }
    out << '\n';
  }
}

std::vector<std::string> list_scenarios(
    const std::vector<std::filesystem::path>& dirs) {
  std::set<std::string> names;
  for (const auto& dir : dirs) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
      Invalid("scenario directory '" + dir.string() + "' does not exist");
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".toml") {
        names.insert(entry.path().stem().string());
      }
    }
  }
  return {names.begin(), names.end()};
}

std::optional<std::filesystem::path> find_scenario(
    const std::string& name, const std::vector<std::filesystem::path>& dirs) {
  for (const auto& dir : dirs) {
    const std::filesystem::path candidate = dir / (name + ".toml");
    std::error_code ec;
    if (std::filesystem::is_regular_file(candidate, ec)) return candidate;
  }
  return std::nullopt;
}

}  // namespace sflgame
