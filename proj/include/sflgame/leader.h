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

#ifndef SFLGAME_LEADER_H_
#define SFLGAME_LEADER_H_

// Stage 2 of the incentive game: the model owner picks the incentive R and
// the cut layer L_c, anticipating the clients' equilibrium response.
//
//   U_MO(R, L_c) = tau1 * ln(1 + sum(d*) / d_req)
//                + tau2 * f_FLOPs(L_c) / w_FLOPs - R
//
// Along the interior equilibrium path d*_n = X_n(L_c) * R, which makes U_MO
// strictly concave in R with stationary point R = tau1 - d_req / sum(X_n).

#include <span>
#include <vector>

#include "sflgame/follower.h"
#include "sflgame/model.h"

namespace sflgame {

struct LeaderProblem {
  SystemParams params;
  std::vector<ClientProfile> clients;
  CutCostModel model;

  // Checks params, every client, the cost model, and tau1, tau2 >= 0.
  void Validate() const;

  // The follower game induced by (r, l_c).
  FollowerProblem Follower(double r, double l_c) const;
};

struct CutResult {
  int l_c = 0;
  double r_star = 0.0;
  double u_mo = 0.0;  // -inf when no client participates at this layer
  bool analytic = false;
};

struct StackelbergOutcome {
  double r_star = 0.0;
  int l_c_star = 0;
  double u_mo = 0.0;
  NashOutcome induced;
  std::vector<CutResult> per_cut_table;
};

double owner_utility(const LeaderProblem& problem, double r, double l_c,
                     std::span<const double> d);

// Per-client slope X_n with d*_n = X_n * R on the interior path. Throws
// kNonInteriorRegime when any X_n <= 0.
std::vector<double> ne_coefficient(const LeaderProblem& problem, double l_c);

struct IncentiveChoice {
  double r_star = 0.0;
  double u_mo = 0.0;
  bool analytic = false;  // true when the closed form was used
};

// Owner utility along the equilibrium path at (r, l_c).
double owner_utility_at_ne(const LeaderProblem& problem, double r, double l_c);

// Best R in [r_min, r_max] for a fixed cut. Uses the closed form when every
// X_n > 0 and no cap binds at the clamped stationary point, and golden-section
// search otherwise.
IncentiveChoice optimal_r_given_cut(const LeaderProblem& problem, double l_c);

// Golden-section search over [r_min, r_max] regardless of regime.
IncentiveChoice golden_section_r(const LeaderProblem& problem, double l_c);

// Sweeps integer l_c over [l_min, l_max]. Ties within 1e-12 go to the smaller
// layer. With jobs > 1 layers are solved concurrently; the result does not
// depend on jobs.
StackelbergOutcome stackelberg_search(const LeaderProblem& problem,
                                      int jobs = 1);

// The better of floor(r) and ceil(r), clamped to [r_min, r_max]; the smaller
// on ties.
IncentiveChoice round_incentive(const LeaderProblem& problem, double l_c,
                                double r);

}  // namespace sflgame

#endif  // SFLGAME_LEADER_H_
