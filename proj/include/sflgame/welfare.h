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

#ifndef SFLGAME_WELFARE_H_
#define SFLGAME_WELFARE_H_

// Social welfare of the contribution game and its price of anarchy,
//
//   W(d) = sum_n U_n(d),   PoA = max_{lower <= d <= upper} W(d) / W(d_ne).

#include <span>
#include <vector>

#include "sflgame/follower.h"

namespace sflgame {

struct WelfareProblem {
  FollowerProblem game;
  std::vector<double> lower;
  std::vector<double> upper;

  // Box [d_req / N, cap_n] for every client.
  static WelfareProblem FromGame(const FollowerProblem& game);

  // Throws kInfeasibleBox unless 0 <= lower_n <= upper_n < inf.
  void Validate() const;
};

struct WelfareOptimum {
  std::vector<double> d;
  double welfare = 0.0;
};

struct PoAReport {
  double welfare_opt = 0.0;
  double welfare_ne = 0.0;
  double poa = 1.0;
  std::vector<double> d_opt;
  std::vector<double> d_ne;      // equilibrium projected onto the box
  std::vector<double> d_ne_raw;  // unprojected equilibrium
};

// Sum of client utilities. Throws kZeroAggregate when sum(d) == 0.
double social_welfare(const WelfareProblem& problem, std::span<const double> d);

// Gradient of social_welfare.
std::vector<double> welfare_gradient(const WelfareProblem& problem,
                                     std::span<const double> d);

// Multi-start projected gradient ascent over the box. Sixteen deterministic
// starts (all-lower, all-upper, centroid, single-client-upper corners, then
// seeded random points) plus any `extra_starts`. Ties go to the earlier start.
WelfareOptimum social_optimum(
    const WelfareProblem& problem,
    std::span<const std::vector<double>> extra_starts = {});

// The equilibrium is projected onto the box and also used as a start, so
// poa >= 1 up to rounding. Throws kNonPositiveWelfare when W(d_ne) <= 0.
PoAReport price_of_anarchy(const WelfareProblem& problem);

}  // namespace sflgame

#endif  // SFLGAME_WELFARE_H_
