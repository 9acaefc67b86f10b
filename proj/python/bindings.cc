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

#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "sflgame/error.h"
#include "sflgame/follower.h"
#include "sflgame/leader.h"
#include "sflgame/model.h"
#include "sflgame/privacy.h"
#include "sflgame/regression.h"
#include "sflgame/scenario.h"
#include "sflgame/welfare.h"

namespace py = pybind11;

namespace sflgame {
namespace {

void BindModel(py::module_& m) {
  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("n_clients", &SystemParams::n_clients)
      .def_readwrite("minibatches", &SystemParams::minibatches)
      .def_readwrite("epochs", &SystemParams::epochs)
      .def_readwrite("rounds", &SystemParams::rounds)
      .def_readwrite("d_req", &SystemParams::d_req)
      .def_readwrite("bits_per_param", &SystemParams::bits_per_param)
      .def_readwrite("smashed_bits", &SystemParams::smashed_bits)
      .def_readwrite("gradient_bits", &SystemParams::gradient_bits)
      .def_readwrite("full_model_gflops", &SystemParams::full_model_gflops)
      .def_readwrite("computing_intensity", &SystemParams::computing_intensity)
      .def_readwrite("tau1", &SystemParams::tau1)
      .def_readwrite("tau2", &SystemParams::tau2)
      .def_readwrite("r_min", &SystemParams::r_min)
      .def_readwrite("r_max", &SystemParams::r_max)
      .def_readwrite("l_min", &SystemParams::l_min)
      .def_readwrite("l_max", &SystemParams::l_max)
      .def("validate", &SystemParams::Validate);

  py::class_<ClientProfile>(m, "ClientProfile")
      .def(py::init<>())
      .def_readwrite("cpu_freq", &ClientProfile::cpu_freq)
      .def_readwrite("psi", &ClientProfile::psi)
      .def_readwrite("dataset_cap", &ClientProfile::dataset_cap)
      .def_readwrite("p_compute", &ClientProfile::p_compute)
      .def_readwrite("p_tx", &ClientProfile::p_tx)
      .def_readwrite("p_rx", &ClientProfile::p_rx)
      .def_readwrite("rate_up_main", &ClientProfile::rate_up_main)
      .def_readwrite("rate_down_main", &ClientProfile::rate_down_main)
      .def_readwrite("rate_up_fed", &ClientProfile::rate_up_fed)
      .def_readwrite("rate_down_fed", &ClientProfile::rate_down_fed)
      .def_readwrite("offset", &ClientProfile::offset)
      .def("validate", &ClientProfile::Validate);

  py::class_<CutCostModel>(m, "CutCostModel")
      .def(py::init<>())
      .def_readwrite("flops_slope", &CutCostModel::flops_slope)
      .def_readwrite("flops_intercept", &CutCostModel::flops_intercept)
      .def_readwrite("params_scale", &CutCostModel::params_scale)
      .def_readwrite("params_rate", &CutCostModel::params_rate);

  py::class_<EnergyCoefficients>(m, "EnergyCoefficients")
      .def_readonly("h", &EnergyCoefficients::h)
      .def_readonly("i", &EnergyCoefficients::i);

  m.def("flops_at_cut", &flops_at_cut, py::arg("model"), py::arg("l_c"));
  m.def("params_at_cut", &params_at_cut, py::arg("model"), py::arg("l_c"));
  m.def("energy_coefficients", &energy_coefficients, py::arg("params"),
        py::arg("client"), py::arg("model"), py::arg("l_c"));
}

void BindFollower(py::module_& m) {
  py::class_<FollowerClient>(m, "FollowerClient")
      .def(py::init([](double h, double i, double psi, double cap,
                       double offset) {
             return FollowerClient{h, i, psi, cap, offset};
           }),
           py::arg("h"), py::arg("i") = 0.0, py::arg("psi") = 1.0,
           py::arg("cap") = 1e300, py::arg("offset") = 0.0)
      .def_readwrite("h", &FollowerClient::h)
      .def_readwrite("i", &FollowerClient::i)
      .def_readwrite("psi", &FollowerClient::psi)
      .def_readwrite("cap", &FollowerClient::cap)
      .def_readwrite("offset", &FollowerClient::offset);

  py::class_<FollowerProblem>(m, "FollowerProblem")
      .def(py::init([](std::vector<FollowerClient> clients, double r,
                       double d_req) {
             FollowerProblem p{std::move(clients), r, d_req};
             p.Validate();
             return p;
           }),
           py::arg("clients"), py::arg("r"), py::arg("d_req") = 2000.0)
      .def_static("from_model",
                  [](const SystemParams& params,
                     const std::vector<ClientProfile>& clients,
                     const CutCostModel& model, double r, double l_c) {
                    return FollowerProblem::FromModel(params, clients, model,
                                                      r, l_c);
                  },
                  py::arg("params"), py::arg("clients"), py::arg("model"),
                  py::arg("r"), py::arg("l_c"))
      .def_readonly("clients", &FollowerProblem::clients)
      .def_readonly("r", &FollowerProblem::r)
      .def_readonly("d_req", &FollowerProblem::d_req);

  py::enum_<Activity>(m, "Activity")
      .value("INTERIOR", Activity::kInterior)
      .value("AT_ZERO", Activity::kAtZero)
      .value("AT_CAP", Activity::kAtCap);
  py::enum_<NashMethod>(m, "NashMethod")
      .value("CLOSED_FORM", NashMethod::kClosedForm)
      .value("FIXED_POINT", NashMethod::kFixedPoint);

  py::class_<NashOutcome>(m, "NashOutcome")
      .def_readonly("d_star", &NashOutcome::d_star)
      .def_readonly("eta", &NashOutcome::eta)
      .def_readonly("active", &NashOutcome::active)
      .def_readonly("utilities", &NashOutcome::utilities)
      .def_readonly("method", &NashOutcome::method)
      .def_readonly("iterations", &NashOutcome::iterations)
      .def_readonly("residual", &NashOutcome::residual);

  m.def("client_utility",
        [](const FollowerProblem& p, const std::vector<double>& d,
           std::size_t n) { return client_utility(p, d, n); },
        py::arg("problem"), py::arg("d"), py::arg("n"));
  m.def("marginal_utility",
        [](const FollowerProblem& p, const std::vector<double>& d,
           std::size_t n) { return marginal_utility(p, d, n); },
        py::arg("problem"), py::arg("d"), py::arg("n"));
  m.def("best_response", &best_response, py::arg("problem"),
        py::arg("d_others_sum"), py::arg("n"));
  m.def("closed_form_ne", &closed_form_ne, py::arg("problem"));
  m.def("br_fixed_point",
        [](const FollowerProblem& p, double tol, int max_iters) {
          return br_fixed_point(p, {tol, max_iters});
        },
        py::arg("problem"), py::arg("tol") = 1e-9,
        py::arg("max_iters") = 10000);
}

void BindLeader(py::module_& m) {
  py::class_<LeaderProblem>(m, "LeaderProblem")
      .def(py::init([](const SystemParams& params,
                       std::vector<ClientProfile> clients,
                       const CutCostModel& model) {
             LeaderProblem p{params, std::move(clients), model};
             p.Validate();
             return p;
           }),
           py::arg("params"), py::arg("clients"),
           py::arg("model") = CutCostModel{})
      .def_readonly("params", &LeaderProblem::params)
      .def_readonly("clients", &LeaderProblem::clients)
      .def_readonly("model", &LeaderProblem::model)
      .def("follower", &LeaderProblem::Follower, py::arg("r"), py::arg("l_c"));

  py::class_<CutResult>(m, "CutResult")
      .def_readonly("l_c", &CutResult::l_c)
      .def_readonly("r_star", &CutResult::r_star)
      .def_readonly("u_mo", &CutResult::u_mo)
      .def_readonly("analytic", &CutResult::analytic);

  py::class_<IncentiveChoice>(m, "IncentiveChoice")
      .def_readonly("r_star", &IncentiveChoice::r_star)
      .def_readonly("u_mo", &IncentiveChoice::u_mo)
      .def_readonly("analytic", &IncentiveChoice::analytic);

  py::class_<StackelbergOutcome>(m, "StackelbergOutcome")
      .def_readonly("r_star", &StackelbergOutcome::r_star)
      .def_readonly("l_c_star", &StackelbergOutcome::l_c_star)
      .def_readonly("u_mo", &StackelbergOutcome::u_mo)
      .def_readonly("induced", &StackelbergOutcome::induced)
      .def_readonly("per_cut_table", &StackelbergOutcome::per_cut_table);

  m.def("owner_utility",
        [](const LeaderProblem& p, double r, double l_c,
           const std::vector<double>& d) { return owner_utility(p, r, l_c, d); },
        py::arg("problem"), py::arg("r"), py::arg("l_c"), py::arg("d"));
  m.def("ne_coefficient", &ne_coefficient, py::arg("problem"), py::arg("l_c"));
  m.def("optimal_r_given_cut", &optimal_r_given_cut, py::arg("problem"),
        py::arg("l_c"));
  m.def("golden_section_r", &golden_section_r, py::arg("problem"),
        py::arg("l_c"));
  m.def("stackelberg_search", &stackelberg_search, py::arg("problem"),
        py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());
}

void BindWelfare(py::module_& m) {
  py::class_<WelfareProblem>(m, "WelfareProblem")
      .def_static("from_game", &WelfareProblem::FromGame, py::arg("game"))
      .def_readwrite("lower", &WelfareProblem::lower)
      .def_readwrite("upper", &WelfareProblem::upper)
      .def_readonly("game", &WelfareProblem::game);

  py::class_<WelfareOptimum>(m, "WelfareOptimum")
      .def_readonly("d", &WelfareOptimum::d)
      .def_readonly("welfare", &WelfareOptimum::welfare);

  py::class_<PoAReport>(m, "PoAReport")
      .def_readonly("welfare_opt", &PoAReport::welfare_opt)
      .def_readonly("welfare_ne", &PoAReport::welfare_ne)
      .def_readonly("poa", &PoAReport::poa)
      .def_readonly("d_opt", &PoAReport::d_opt)
      .def_readonly("d_ne", &PoAReport::d_ne)
      .def_readonly("d_ne_raw", &PoAReport::d_ne_raw);

  m.def("social_welfare",
        [](const WelfareProblem& p, const std::vector<double>& d) {
          return social_welfare(p, d);
        },
        py::arg("problem"), py::arg("d"));
  m.def("social_optimum",
        [](const WelfareProblem& p) { return social_optimum(p); },
        py::arg("problem"));
  m.def("price_of_anarchy", &price_of_anarchy, py::arg("problem"));
}

void BindData(py::module_& m) {
  py::class_<FitReport>(m, "FitReport")
      .def_readonly("model", &FitReport::model)
      .def_readonly("rmse_flops", &FitReport::rmse_flops)
      .def_readonly("rmse_params", &FitReport::rmse_params)
      .def_readonly("n_samples", &FitReport::n_samples);

  // Samples as (l_c, gflops or None, mparams or None) tuples.
  m.def("fit_cost_model",
        [](const std::vector<std::tuple<double, std::optional<double>,
                                        std::optional<double>>>& rows) {
          std::vector<ProfileSample> samples;
          for (const auto& [l_c, gflops, mparams] : rows) {
            samples.push_back({l_c, gflops, mparams});
          }
          return fit_cost_model(samples);
        },
        py::arg("samples"));
  m.def("read_profile_csv", &read_profile_csv_file, py::arg("path"));
  py::class_<ProfileSample>(m, "ProfileSample")
      .def_readonly("l_c", &ProfileSample::l_c)
      .def_readonly("gflops", &ProfileSample::gflops)
      .def_readonly("mparams", &ProfileSample::mparams);

  py::class_<PrivacyRecord>(m, "PrivacyRecord")
      .def_readonly("l_c", &PrivacyRecord::l_c)
      .def_readonly("sigma", &PrivacyRecord::sigma)
      .def_readonly("accuracy", &PrivacyRecord::accuracy)
      .def_readonly("ssim", &PrivacyRecord::ssim);

  py::class_<PrivacyTable>(m, "PrivacyTable")
      .def_static("builtin", &PrivacyTable::Builtin)
      .def_static("from_csv", &PrivacyTable::FromCsvFile, py::arg("path"))
      .def_property_readonly("records", &PrivacyTable::records)
      .def("lookup", &PrivacyTable::lookup, py::arg("l_c"), py::arg("sigma"))
      .def("recommend_min_cut", &PrivacyTable::recommend_min_cut,
           py::arg("ssim_threshold"), py::arg("sigma"));

  // Returns (header, rows); empty cells are None.
  m.def("run_scenario",
        [](const std::filesystem::path& path, int jobs) {
          ResultTable table;
          {
            py::gil_scoped_release release;
            table = sflgame::run_scenario(load_scenario(path), jobs);
          }
          return py::make_tuple(table.header, table.rows);
        },
        py::arg("path"), py::arg("jobs") = 1);
}

}  // namespace
}  // namespace sflgame

PYBIND11_MODULE(_sflgame, m) {
  m.doc() = "Incentive and cut-layer games for split federated learning";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object>
      error_type;
  error_type.call_once_and_store_result([&]() {
    return py::object(py::exception<sflgame::Error>(m, "Error",
                                                    PyExc_RuntimeError));
  });
  // Raised errors carry the failure class name in `code`.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const sflgame::Error& e) {
      const py::object& type = error_type.get_stored();
      py::object instance = type(e.what());
      instance.attr("code") = std::string(sflgame::ErrorCodeName(e.code()));
      PyErr_SetObject(type.ptr(), instance.ptr());
    }
  });

  sflgame::BindModel(m);
  sflgame::BindFollower(m);
  sflgame::BindLeader(m);
  sflgame::BindWelfare(m);
  sflgame::BindData(m);
}
