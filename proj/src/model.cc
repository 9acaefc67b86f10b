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

#include "sflgame/model.h"

#include <cmath>
#include <string>

#include "sflgame/error.h"

namespace sflgame {
namespace {

constexpr double kGiga = 1e9;
constexpr double kMega = 1e6;

void Require(bool ok, const char* field, const std::string& what) {
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(field) + " " + what);
  }
}

}  // namespace

void SystemParams::Validate() const {
  Require(n_clients >= 2, "n_clients", "must be at least 2");
  Require(minibatches >= 1, "minibatches", "must be at least 1");
  Require(epochs >= 1, "epochs", "must be at least 1");
  Require(rounds >= 1, "rounds", "must be at least 1");
  Require(d_req > 0, "d_req", "must be positive");
  Require(bits_per_param >= 0, "bits_per_param", "must be non-negative");
  Require(smashed_bits >= 0, "smashed_size", "must be non-negative");
  Require(gradient_bits >= 0, "gradient_size", "must be non-negative");
  Require(full_model_gflops > 0, "full_model_flops", "must be positive");
  Require(computing_intensity > 0, "computing_intensity", "must be positive");
  Require(tau1 >= 0, "tau1", "must be non-negative");
  Require(tau2 >= 0, "tau2", "must be non-negative");
  Require(r_min > 0, "r_min", "must be positive");
  Require(r_min <= r_max, "r_max", "must be >= r_min");
  Require(l_min >= 1, "l_min", "must be at least 1");
  Require(l_min <= l_max, "l_max", "must be >= l_min");
}

void ClientProfile::Validate() const {
  Require(cpu_freq > 0, "cpu_freq", "must be positive");
  Require(psi > 0, "psi", "must be positive");
  Require(dataset_cap > 0, "dataset_cap", "must be positive");
  Require(p_compute > 0, "p_compute", "must be positive");
  Require(p_tx > 0, "p_tx", "must be positive");
  Require(p_rx > 0, "p_rx", "must be positive");
  Require(rate_up_main > 0, "rate_up_main", "must be positive");
  Require(rate_down_main > 0, "rate_down_main", "must be positive");
  Require(rate_up_fed > 0, "rate_up_fed", "must be positive");
  Require(rate_down_fed > 0, "rate_down_fed", "must be positive");
  Require(std::isfinite(offset), "offset", "must be finite");
}

void CutCostModel::Validate(int l_min, int l_max) const {
  Require(flops_slope > 0, "flops_slope", "must be positive");
  Require(params_scale > 0, "params_scale", "must be positive");
  Require(params_rate > 0, "params_rate", "must be positive");
  // Affine with positive slope: positive on the range iff positive at l_min.
  if (flops_slope * l_min + flops_intercept <= 0) {
    throw Error(ErrorCode::kNonPositiveCost,
                "flops model is non-positive at l_min=" +
                    std::to_string(l_min) + " (l_max=" +
                    std::to_string(l_max) + ")");
  }
}

double flops_at_cut(const CutCostModel& model, double l_c) {
  const double gflops = model.flops_slope * l_c + model.flops_intercept;
  if (!(gflops > 0)) {
    throw Error(ErrorCode::kNonPositiveCost,
                "flops model gives " + std::to_string(gflops) +
                    " GFLOPs at l_c=" + std::to_string(l_c));
  }
  return gflops;
}

double params_at_cut(const CutCostModel& model, double l_c) {
  return model.params_scale * std::exp(model.params_rate * l_c);
}

double compute_latency(const SystemParams& params, const ClientProfile& client,
                       const CutCostModel& model, double d_n, double l_c) {
  const double batch = d_n / params.minibatches;
  return batch * flops_at_cut(model, l_c) * kGiga /
         (client.cpu_freq * params.computing_intensity);
}

double comm_energy_main(const SystemParams& params,
                        const ClientProfile& client) {
  return client.p_tx * params.smashed_bits / client.rate_up_main +
         client.p_rx * params.gradient_bits / client.rate_down_main;
}

double comm_energy_fed(const SystemParams& params, const ClientProfile& client,
                       const CutCostModel& model, double l_c) {
  const double model_bits =
      params.bits_per_param * params_at_cut(model, l_c) * kMega;
  return model_bits *
         (client.p_tx / client.rate_up_fed + client.p_rx / client.rate_down_fed);
}

EnergyCoefficients energy_coefficients(const SystemParams& params,
                                       const ClientProfile& client,
                                       const CutCostModel& model, double l_c) {
  const double rounds = params.rounds;
  const double a_n = params.epochs * client.p_compute /
                     (client.cpu_freq * params.computing_intensity);
  const double b_n = static_cast<double>(params.epochs) * params.minibatches *
                     comm_energy_main(params, client);
  const double c_n = params.bits_per_param * (client.p_tx / client.rate_up_fed +
                                              client.p_rx / client.rate_down_fed);
  EnergyCoefficients out;
  out.h = rounds * flops_at_cut(model, l_c) * kGiga * a_n;
  out.i = rounds * (b_n + c_n * params_at_cut(model, l_c) * kMega);
  return out;
}

EnergyBreakdown total_energy(const SystemParams& params,
                             const ClientProfile& client,
                             const CutCostModel& model, double l_c,
                             double d_n) {
  EnergyBreakdown out;
  const double wc_params = params_at_cut(model, l_c) * kMega;
  out.t_compute = compute_latency(params, client, model, d_n, l_c);
  out.t_up_main = params.smashed_bits / client.rate_up_main;
  out.t_down_main = params.gradient_bits / client.rate_down_main;
  out.t_up_fed = params.bits_per_param * wc_params / client.rate_up_fed;
  out.t_down_fed = params.bits_per_param * wc_params / client.rate_down_fed;

  const double batches_per_round =
      static_cast<double>(params.epochs) * params.minibatches;
  const double per_batch_main =
      client.p_tx * out.t_up_main + client.p_rx * out.t_down_main;
  const double per_sync_fed =
      client.p_tx * out.t_up_fed + client.p_rx * out.t_down_fed;

  out.e_compute =
      params.rounds * batches_per_round * client.p_compute * out.t_compute;
  out.e_com_main = params.rounds * batches_per_round * per_batch_main;
  out.e_com_fed = params.rounds * per_sync_fed;
  out.e_total = out.e_compute + out.e_com_main + out.e_com_fed;

  const EnergyCoefficients hi = energy_coefficients(params, client, model, l_c);
  out.h_coeff = hi.h;
  out.i_coeff = hi.i;
  return out;
}

}  // namespace sflgame
