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

#ifndef SFLGAME_MODEL_H_
#define SFLGAME_MODEL_H_

// Domain types and energy arithmetic for split federated learning clients.
//
// Units used throughout:
//   FLOPs counts are stored in GFLOPs, parameter counts in millions (Mparams).
//   Sizes are in bits, rates in bits/s, powers in watts, frequencies in Hz.
//   Energies are in joules.

namespace sflgame {

// Global constants shared by all clients.
struct SystemParams {
  int n_clients = 5;
  int minibatches = 100;  // M, mini-batches per epoch
  int epochs = 5;         // E, local epochs per round
  int rounds = 20;        // T, communication rounds
  double d_req = 2000.0;  // required aggregate contribution (data items)
  double bits_per_param = 32.0;
  double smashed_bits = 24.5e6;   // s, per mini-batch
  double gradient_bits = 24.5e6;  // g, per mini-batch
  double full_model_gflops = 4.3;
  double computing_intensity = 16.0;  // FLOPs per cycle
  double tau1 = 300.0;
  double tau2 = 1.0;
  double r_min = 1.0;
  double r_max = 1000.0;
  int l_min = 3;
  int l_max = 12;

  // Throws Error(kInvalidArgument) naming the first offending field.
  void Validate() const;
};

struct ClientProfile {
  double cpu_freq = 1.2e9;  // Hz
  double psi = 2800.0;      // incentive weight
  double dataset_cap = 10000.0;
  double p_compute = 4.0;
  double p_tx = 0.2;
  double p_rx = 0.2;
  double rate_up_main = 100e6;
  double rate_down_main = 200e6;
  double rate_up_fed = 100e6;
  double rate_down_fed = 200e6;
  double offset = 1e6;  // S, baseline satisfaction

  void Validate() const;
};

// f_FLOPs(l) = a*l + b (GFLOPs) and |w_c|(l) = c*exp(d*l) (Mparams).
struct CutCostModel {
  double flops_slope = 0.3779;
  double flops_intercept = -0.212;
  double params_scale = 0.1098;
  double params_rate = 0.4711;

  // Checks coefficient signs and that the FLOPs model stays positive on
  // [l_min, l_max].
  void Validate(int l_min, int l_max) const;
};

struct EnergyBreakdown {
  // Per mini-batch / per transfer latencies, seconds.
  double t_compute = 0.0;
  double t_up_main = 0.0;
  double t_down_main = 0.0;
  double t_up_fed = 0.0;
  double t_down_fed = 0.0;
  // Totals over all rounds, joules.
  double e_compute = 0.0;
  double e_com_main = 0.0;
  double e_com_fed = 0.0;
  double e_total = 0.0;
  double h_coeff = 0.0;  // marginal energy per contributed data item
  double i_coeff = 0.0;  // contribution-independent energy
};

struct EnergyCoefficients {
  double h = 0.0;
  double i = 0.0;
};

// GFLOPs for one sample through the client-side model. Throws
// kNonPositiveCost when the affine model is not positive at l_c.
double flops_at_cut(const CutCostModel& model, double l_c);

// Client-side parameter count in Mparams.
double params_at_cut(const CutCostModel& model, double l_c);

// Seconds to process one mini-batch of d_n / M samples.
double compute_latency(const SystemParams& params, const ClientProfile& client,
                       const CutCostModel& model, double d_n, double l_c);

// Energy exchanged with the main server for one mini-batch.
double comm_energy_main(const SystemParams& params,
                        const ClientProfile& client);

// Energy exchanged with the fed server for one model synchronization.
double comm_energy_fed(const SystemParams& params, const ClientProfile& client,
                       const CutCostModel& model, double l_c);

// Affine decomposition E_tot(d) = d*H + I.
EnergyCoefficients energy_coefficients(const SystemParams& params,
                                       const ClientProfile& client,
                                       const CutCostModel& model, double l_c);

EnergyBreakdown total_energy(const SystemParams& params,
                             const ClientProfile& client,
                             const CutCostModel& model, double l_c,
                             double d_n);

}  // namespace sflgame

#endif  // SFLGAME_MODEL_H_
