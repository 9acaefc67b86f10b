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

#include "sflgame/leader.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "sflgame/error.h"

namespace sflgame {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
constexpr int kGoldenMaxIters = 60;

double Sum(std::span<const double> d) {
  return std::accumulate(d.begin(), d.end(), 0.0);
}

CutResult SolveCut(const LeaderProblem& problem, int l_c) {
  CutResult row;
  row.l_c = l_c;
  try {
    const IncentiveChoice choice = optimal_r_given_cut(problem, l_c);
    row.r_star = choice.r_star;
    row.u_mo = choice.u_mo;
    row.analytic = choice.analytic;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoParticipation) throw;
    row.r_star = problem.params.r_min;
    row.u_mo = -std::numeric_limits<double>::infinity();
  }
  return row;
}

}  // namespace

void LeaderProblem::Validate() const {
  params.Validate();
  model.Validate(params.l_min, params.l_max);
  if (!(params.tau1 >= 0) || !(params.tau2 >= 0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau1 and tau2 must be >= 0");
  }
  if (clients.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "the contribution game needs at least 2 clients");
  }
  for (const ClientProfile& c : clients) c.Validate();
}

FollowerProblem LeaderProblem::Follower(double r, double l_c) const {
  return FollowerProblem::FromModel(params, clients, model, r, l_c);
}

double owner_utility(const LeaderProblem& problem, double r, double l_c,
                     std::span<const double> d) {
  const SystemParams& p = problem.params;
  return p.tau1 * std::log1p(Sum(d) / p.d_req) +
         p.tau2 * flops_at_cut(problem.model, l_c) / p.full_model_gflops - r;
}

double owner_utility_at_ne(const LeaderProblem& problem, double r,
                           double l_c) {
  const NashOutcome ne = closed_form_ne(problem.Follower(r, l_c));
  return owner_utility(problem, r, l_c, ne.d_star);
}

std::vector<double> ne_coefficient(const LeaderProblem& problem, double l_c) {
  // The slopes do not depend on R, so any positive value builds the game.
  const FollowerProblem game = problem.Follower(1.0, l_c);
  const double km1 = static_cast<double>(game.size() - 1);
  double cost_sum = 0.0;
  for (const FollowerClient& c : game.clients) cost_sum += c.h / c.psi;

  std::vector<double> x(game.size());
  for (std::size_t n = 0; n < game.size(); ++n) {
    const double cost = game.clients[n].h / game.clients[n].psi;
    x[n] = km1 / cost_sum * (1.0 - cost * km1 / cost_sum);
    if (!(x[n] > 0)) {
      throw Error(ErrorCode::kNonInteriorRegime,
                  "client " + std::to_string(n) + " has X_n <= 0 at l_c=" +
                      std::to_string(l_c));
    }
  }
  return x;
}

IncentiveChoice golden_section_r(const LeaderProblem& problem, double l_c) {
  problem.Validate();
  const double r_min = problem.params.r_min;
  const double r_max = problem.params.r_max;
  const auto u = [&](double r) { return owner_utility_at_ne(problem, r, l_c); };

  const double tol = 1e-9 * (r_max - r_min);
  double a = r_min, b = r_max;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double uc = u(c), ud = u(d);
  for (int k = 0; k < kGoldenMaxIters && b - a > tol; ++k) {
    if (uc >= ud) {
      b = d;
      d = c;
      ud = uc;
      c = b - kInvPhi * (b - a);
      uc = u(c);
    } else {
      a = c;
      c = d;
      uc = ud;
      d = a + kInvPhi * (b - a);
      ud = u(d);
    }
  }

  IncentiveChoice best{0.5 * (a + b), 0.0, false};
  best.u_mo = u(best.r_star);
  for (const double r : {r_min, r_max}) {
    const double value = u(r);
    if (value > best.u_mo) best = {r, value, false};
  }
  return best;
}

IncentiveChoice optimal_r_given_cut(const LeaderProblem& problem, double l_c) {
  problem.Validate();
  const SystemParams& p = problem.params;
  std::vector<double> x;
  try {
    x = ne_coefficient(problem, l_c);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonInteriorRegime) throw;
    return golden_section_r(problem, l_c);
  }

  const double x_sum = Sum(x);
  const double r = std::clamp(p.tau1 - p.d_req / x_sum, p.r_min, p.r_max);
  for (std::size_t n = 0; n < x.size(); ++n) {
    if (x[n] * r > problem.clients[n].dataset_cap) {
      return golden_section_r(problem, l_c);
    }
  }
  return {r, owner_utility_at_ne(problem, r, l_c), true};
}

StackelbergOutcome stackelberg_search(const LeaderProblem& problem, int jobs) {
  problem.Validate();
  const int l_min = problem.params.l_min;
  const int count = problem.params.l_max - l_min + 1;

  std::vector<CutResult> table(count);
  std::vector<std::exception_ptr> failures(count);
  const auto solve = [&](int i) {
    try {
      table[i] = SolveCut(problem, l_min + i);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  const int workers = std::clamp(jobs, 1, count);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) solve(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++) solve(i);
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const double margin = 1e-12 * std::max(1.0, std::abs(table[best].u_mo));
    if (table[i].u_mo > table[best].u_mo + margin) best = i;
  }
  if (!std::isfinite(table[best].u_mo)) {
    throw Error(ErrorCode::kNoParticipation,
                "no cut layer induces participation");
  }

  StackelbergOutcome outcome;
  outcome.r_star = table[best].r_star;
  outcome.l_c_star = table[best].l_c;
  outcome.u_mo = table[best].u_mo;
  outcome.induced =
      closed_form_ne(problem.Follower(outcome.r_star, outcome.l_c_star));
  outcome.per_cut_table = std::move(table);
  return outcome;
}

IncentiveChoice round_incentive(const LeaderProblem& problem, double l_c,
                                double r) {
  const SystemParams& p = problem.params;
  const double lo = std::clamp(std::floor(r), p.r_min, p.r_max);
  const double hi = std::clamp(std::ceil(r), p.r_min, p.r_max);
  IncentiveChoice choice{lo, owner_utility_at_ne(problem, lo, l_c), false};
  if (hi != lo) {
    const double u_hi = owner_utility_at_ne(problem, hi, l_c);
    if (u_hi > choice.u_mo) choice = {hi, u_hi, false};
  }
  return choice;
}

}  // namespace sflgame
