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

#ifndef SFLGAME_FOLLOWER_H_
#define SFLGAME_FOLLOWER_H_

// Stage 1 of the incentive game: clients choose how much data to contribute.
//
// Client n receives a share psi_n * R * d_n / sum(d) of the incentive and pays
// the energy cost d_n * H_n + I_n. Its utility is strictly concave in d_n, so
// the contribution game has a unique Nash equilibrium. For interior solutions
// the equilibrium has the closed form
//
//   eta  = (N - 1) R / sum_l (H_l / psi_l)
//   d_n* = eta * (1 - (N - 1) (H_n / psi_n) / sum_l (H_l / psi_l)).

#include <span>
#include <string_view>
#include <vector>

#include "sflgame/model.h"

namespace sflgame {

// Reduced per-client data of the contribution game.
struct FollowerClient {
  double h = 1.0;    // marginal energy per data item
  double i = 0.0;    // fixed energy
  double psi = 1.0;  // incentive weight
  double cap = 1e300;
  double offset = 0.0;  // S
};

struct FollowerProblem {
  std::vector<FollowerClient> clients;
  double r = 1.0;  // total incentive
  double d_req = 1.0;  // only used to seed the iterative solver

  // Builds the reduced game from system constants at cut layer l_c. Validates
  // all inputs, including l_min <= l_c <= l_max.
  static FollowerProblem FromModel(const SystemParams& params,
                                   std::span<const ClientProfile> clients,
                                   const CutCostModel& model, double r,
                                   double l_c);

  std::size_t size() const { return clients.size(); }

  // Rejects N < 2, r <= 0, and non-positive h/psi/cap.
  void Validate() const;
};

enum class Activity { kInterior, kAtZero, kAtCap };
enum class NashMethod { kClosedForm, kFixedPoint };

std::string_view ActivityName(Activity a);

struct NashOutcome {
  std::vector<double> d_star;
  double eta = 0.0;
  std::vector<Activity> active;
  std::vector<double> utilities;
  NashMethod method = NashMethod::kClosedForm;
  int iterations = 0;
  double residual = 0.0;  // max |BR_n(d) - d_n| at return (fixed point only)
};

// U_n(d). Throws kZeroAggregate when sum(d) == 0.
double client_utility(const FollowerProblem& problem, std::span<const double> d,
                      std::size_t n);

// dU_n/dd_n. Throws kZeroAggregate when sum(d) == 0.
double marginal_utility(const FollowerProblem& problem,
                        std::span<const double> d, std::size_t n);

// Best response of client n to the aggregate contribution of the others.
double best_response(const FollowerProblem& problem, double d_others_sum,
                     std::size_t n);

// Closed-form equilibrium with active-set reduction for drop-outs. Falls back
// to br_fixed_point when a dataset cap binds. Throws kNoParticipation when no
// client contributes.
NashOutcome closed_form_ne(const FollowerProblem& problem);

struct FixedPointOptions {
  double tol = 1e-9;
  int max_iters = 10000;
};

// Cyclic best-response iteration. Stalled runs are reseeded from the
// aggregate once, then damped; a Newton step finishes near the solution.
// Throws kNonConvergence with the last residual.
NashOutcome br_fixed_point(const FollowerProblem& problem,
                           FixedPointOptions options = {});

// Fills eta, activity flags and utilities for a given profile.
void FinalizeOutcome(const FollowerProblem& problem, NashOutcome& outcome);

}  // namespace sflgame

#endif  // SFLGAME_FOLLOWER_H_
