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

#include "sflgame/follower.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sflgame/error.h"

namespace sflgame {
namespace {

double Sum(std::span<const double> d) {
  return std::accumulate(d.begin(), d.end(), 0.0);
}

// Summed directly rather than as total - d[n]: a dominant client's best
// response amplifies the cancellation error of the difference.
double OthersSum(std::span<const double> d, std::size_t n) {
  double others = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (j != n) others += d[j];
  }
  return others;
}

void CheckIndex(const FollowerProblem& problem, std::size_t n) {
  if (n >= problem.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "client index " + std::to_string(n) + " out of range");
  }
}

void CheckProfile(const FollowerProblem& problem, std::span<const double> d) {
  if (d.size() != problem.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "contribution vector has " + std::to_string(d.size()) +
                    " entries, expected " + std::to_string(problem.size()));
  }
}

// Largest |BR_n(d_-n) - d_n| over all clients.
double BestResponseResidual(const FollowerProblem& problem,
                            std::span<const double> d) {
  double residual = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    const double others = OthersSum(d, n);
    residual = std::max(residual,
                        std::abs(best_response(problem, others, n) - d[n]));
  }
  return residual;
}

}  // namespace

std::string_view ActivityName(Activity a) {
  switch (a) {
    case Activity::kInterior: return "interior";
    case Activity::kAtZero: return "zero";
    case Activity::kAtCap: return "cap";
  }
  return "unknown";
}

FollowerProblem FollowerProblem::FromModel(
    const SystemParams& params, std::span<const ClientProfile> clients,
    const CutCostModel& model, double r, double l_c) {
  params.Validate();
  model.Validate(params.l_min, params.l_max);
  if (l_c < params.l_min || l_c > params.l_max) {
    throw Error(ErrorCode::kInvalidArgument,
                "l_c=" + std::to_string(l_c) + " outside [l_min, l_max]");
  }
  FollowerProblem problem;
  problem.r = r;
  problem.d_req = params.d_req;
  problem.clients.reserve(clients.size());
  for (const ClientProfile& c : clients) {
    c.Validate();
    const EnergyCoefficients hi = energy_coefficients(params, c, model, l_c);
    problem.clients.push_back(
        {hi.h, hi.i, c.psi, c.dataset_cap, c.offset});
  }
  problem.Validate();
  return problem;
}

void FollowerProblem::Validate() const {
  if (clients.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "the contribution game needs at least 2 clients");
  }
  if (!(r > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "incentive r must be positive");
  }
  for (std::size_t n = 0; n < clients.size(); ++n) {
    const FollowerClient& c = clients[n];
    if (!(c.h > 0) || !(c.psi > 0) || !(c.cap > 0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "client " + std::to_string(n) +
                      " needs h > 0, psi > 0 and cap > 0");
    }
  }
}

double client_utility(const FollowerProblem& problem, std::span<const double> d,
                      std::size_t n) {
  CheckProfile(problem, d);
  CheckIndex(problem, n);
  const double total = Sum(d);
  if (total == 0.0) {
    throw Error(ErrorCode::kZeroAggregate,
                "incentive share undefined when all contributions are zero");
  }
  const FollowerClient& c = problem.clients[n];
  return c.psi * problem.r * d[n] / total - d[n] * c.h - c.i + c.offset;
}

double marginal_utility(const FollowerProblem& problem,
                        std::span<const double> d, std::size_t n) {
  CheckProfile(problem, d);
  CheckIndex(problem, n);
  const double total = Sum(d);
  if (total == 0.0) {
    throw Error(ErrorCode::kZeroAggregate,
                "marginal utility undefined when all contributions are zero");
  }
  const FollowerClient& c = problem.clients[n];
  const double others = total - d[n];
  return c.psi * problem.r * others / (total * total) - c.h;
}

double best_response(const FollowerProblem& problem, double d_others_sum,
                     std::size_t n) {
  CheckIndex(problem, n);
  const FollowerClient& c = problem.clients[n];
  const double k = c.psi * problem.r / c.h;
  if (k <= d_others_sum) return 0.0;
  const double root = std::sqrt(d_others_sum);
  const double d = root * (std::sqrt(k) - root);
  return std::clamp(d, 0.0, c.cap);
}

void FinalizeOutcome(const FollowerProblem& problem, NashOutcome& outcome) {
  const std::size_t n_clients = problem.size();
  outcome.eta = Sum(outcome.d_star);
  outcome.active.assign(n_clients, Activity::kInterior);
  outcome.utilities.assign(n_clients, 0.0);
  for (std::size_t n = 0; n < n_clients; ++n) {
    const double d = outcome.d_star[n];
    if (d <= 0.0) {
      outcome.active[n] = Activity::kAtZero;
    } else if (d >= problem.clients[n].cap) {
      outcome.active[n] = Activity::kAtCap;
    }
    outcome.utilities[n] = client_utility(problem, outcome.d_star, n);
  }
}

NashOutcome closed_form_ne(const FollowerProblem& problem) {
  problem.Validate();
  const std::size_t n_clients = problem.size();
  std::vector<bool> in_game(n_clients, true);
  std::vector<double> share(n_clients, 0.0);  // d_n* / R

  // Drop clients whose closed-form contribution is non-positive and re-solve
  // over the remaining set until every remaining entry is positive.
  while (true) {
    std::size_t k = 0;
    double cost_sum = 0.0;
    for (std::size_t n = 0; n < n_clients; ++n) {
      if (!in_game[n]) continue;
      ++k;
      cost_sum += problem.clients[n].h / problem.clients[n].psi;
    }
    if (k < 2) {
      throw Error(ErrorCode::kNoParticipation,
                  "fewer than two clients remain after drop-out reduction");
    }
    const double km1 = static_cast<double>(k - 1);
    bool dropped = false;
    for (std::size_t n = 0; n < n_clients; ++n) {
      if (!in_game[n]) continue;
      const double cost = problem.clients[n].h / problem.clients[n].psi;
      share[n] = km1 / cost_sum * (1.0 - cost * km1 / cost_sum);
      if (share[n] <= 0.0) {
        in_game[n] = false;
        share[n] = 0.0;
        dropped = true;
      }
    }
    if (!dropped) break;
  }

  NashOutcome outcome;
  outcome.method = NashMethod::kClosedForm;
  outcome.d_star.resize(n_clients);
  for (std::size_t n = 0; n < n_clients; ++n) {
    outcome.d_star[n] = share[n] * problem.r;
  }
  const double eta = Sum(outcome.d_star);

  bool needs_iteration = false;
  for (std::size_t n = 0; n < n_clients; ++n) {
    const FollowerClient& c = problem.clients[n];
    if (outcome.d_star[n] > c.cap) needs_iteration = true;
    // A dropped client must prefer zero against the reduced aggregate.
    if (!in_game[n] && c.psi * problem.r / c.h > eta) needs_iteration = true;
  }
  if (needs_iteration) return br_fixed_point(problem);

  FinalizeOutcome(problem, outcome);
  return outcome;
}

namespace {

// One Gauss-Seidel sweep of best responses; returns the largest unrelaxed
// step.
//
// A client whose best response exceeds the others' total has a response
// slope b = dBR/ds > 0, and plain cyclic updates orbit the equilibrium
// through it. Its update is relaxed by 1 / (1 + b). To first order that
// relaxed step equals the contribution solving the client's own first-order
// condition at the current aggregate, d = eta - eta^2 H / (psi R), which is
// what is used: it stays well defined far from the equilibrium.
//
// When every other client sits at zero the best response is the unattained
// limit 0+, approached by halving so the iterate never lands on the all-zero
// profile.
double Sweep(const FollowerProblem& problem, double damping,
             std::vector<double>& d) {
  double largest = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    const FollowerClient& c = problem.clients[n];
    const double others = OthersSum(d, n);
    double target = 0.5 * d[n];
    if (others > 0.0) {
      const double response = best_response(problem, others, n);
      largest = std::max(largest, std::abs(response - d[n]));
      target = response;
      if (response > others && response < c.cap) {
        const double eta = d[n] + others;
        const double relaxed = eta - eta * eta * c.h / (c.psi * problem.r);
        // Far from the equilibrium the estimate can overshoot; keep it
        // between the current value and the best response, and never at 0.
        target = std::clamp(relaxed, std::min(d[n], response),
                            std::max(d[n], response));
        if (target <= 0.0) target = response;
      }
    } else {
      largest = std::max(largest, d[n]);
    }
    d[n] += damping * (target - d[n]);
  }
  return largest;
}

// One Newton step on G(d) = BR(d_-n) - d. The Jacobian is
// -diag(1 + b) + b 1^T with b_n the response slope of interior clients, so
// Sherman-Morrison solves it in O(N). Returns false if the system is singular.
bool NewtonStep(const FollowerProblem& problem, std::vector<double>& d) {
  const std::size_t n_clients = d.size();
  std::vector<double> g(n_clients), b(n_clients, 0.0);
  for (std::size_t n = 0; n < n_clients; ++n) {
    const FollowerClient& c = problem.clients[n];
    const double others = OthersSum(d, n);
    const double response = best_response(problem, others, n);
    g[n] = response - d[n];
    if (response > 0.0 && response < c.cap) {
      b[n] = std::sqrt(c.psi * problem.r / c.h) / (2.0 * std::sqrt(others)) -
             1.0;
    }
  }
  // (-D + b 1^T) x = -g  =>  x = D^-1 g + D^-1 b (1^T D^-1 g) / (1 - 1^T D^-1 b)
  double sum_g = 0.0, sum_b = 0.0;
  for (std::size_t n = 0; n < n_clients; ++n) {
    sum_g += g[n] / (1.0 + b[n]);
    sum_b += b[n] / (1.0 + b[n]);
  }
  const double denom = 1.0 - sum_b;
  if (!std::isfinite(denom) || std::abs(denom) < 1e-300) return false;
  for (std::size_t n = 0; n < n_clients; ++n) {
    const double x = (g[n] + b[n] * sum_g / denom) / (1.0 + b[n]);
    d[n] = std::clamp(d[n] + x, 0.0, problem.clients[n].cap);
  }
  return true;
}

// Contribution of client n when the aggregate is eta: the solution of its
// first-order condition, clamped to [0, cap].
double ShareAt(const FollowerClient& c, double r, double eta) {
  return std::clamp(eta - eta * eta * c.h / (c.psi * r), 0.0, c.cap);
}

// Replaces d with the profile whose shares are consistent with their own
// aggregate, found by bisection on sum_n ShareAt(eta) / eta = 1. The ratio
// falls monotonically in eta, so the root is unique.
void AggregateReseed(const FollowerProblem& problem, std::vector<double>& d) {
  double hi = 0.0;
  for (const FollowerClient& c : problem.clients) {
    hi = std::max(hi, c.psi * problem.r / c.h);
  }
  double lo = 0.0;
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    double ratio = 0.0;
    for (const FollowerClient& c : problem.clients) {
      ratio += ShareAt(c, problem.r, mid) / mid;
    }
    (ratio > 1.0 ? lo : hi) = mid;
  }
  for (std::size_t n = 0; n < d.size(); ++n) {
    d[n] = ShareAt(problem.clients[n], problem.r, 0.5 * (lo + hi));
  }
}

}  // namespace

NashOutcome br_fixed_point(const FollowerProblem& problem,
                           FixedPointOptions options) {
  problem.Validate();
  if (!(options.tol > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  }
  const std::size_t n_clients = problem.size();
  std::vector<double> d(n_clients);
  for (std::size_t n = 0; n < n_clients; ++n) {
    d[n] = std::min(problem.clients[n].cap,
                    problem.d_req / static_cast<double>(n_clients));
  }

  // A window of sweeps that fails to halve the step counts as a stall. The
  // first stall moves the iterate to the aggregate-consistent profile; later
  // ones halve a global damping factor.
  constexpr int kWindow = 20;
  double damping = 1.0;
  bool reseeded = false;
  double window_start = std::numeric_limits<double>::infinity();

  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    const double step = Sweep(problem, damping, d);
    if (iter % kWindow == 0) {
      const bool stalled = step > 0.5 * window_start;
      window_start = step;
      if (stalled) {
        if (!reseeded) {
          AggregateReseed(problem, d);
          reseeded = true;
        } else if (damping > 1e-3) {
          damping *= 0.5;
        }
        window_start = std::numeric_limits<double>::infinity();
        continue;
      }
    }
    const double total = Sum(d);
    // Absolute tolerance, floored at the rounding level of the aggregate.
    const double tol = std::max(options.tol, 1e-14 * total);
    residual = step;
    if (step >= tol && step < 1e-6 * total) {
      // Near the equilibrium the relaxed sweep contracts slowly and stalls at
      // a rounding floor; finish with Newton steps while they help.
      std::vector<double> trial = d;
      double current = BestResponseResidual(problem, d);
      for (int k = 0; k < 8 && current >= tol; ++k) {
        if (!NewtonStep(problem, trial)) break;
        const double next = BestResponseResidual(problem, trial);
        if (!(next < current)) break;
        d = trial;
        current = next;
      }
      residual = current;
    }
    if (residual >= tol) continue;
    residual = BestResponseResidual(problem, d);
    // The second test rejects iterates that shrank towards the all-zero
    // profile, where every absolute change is small.
    if (residual < tol && residual <= 1e-6 * total) {
      // Clients whose best response is exactly zero are snapped to it.
      for (std::size_t n = 0; n < n_clients; ++n) {
        const double others = OthersSum(d, n);
        if (others > 0.0 && best_response(problem, others, n) == 0.0) {
          d[n] = 0.0;
        }
      }
      NashOutcome outcome;
      outcome.method = NashMethod::kFixedPoint;
      outcome.d_star = std::move(d);
      outcome.iterations = iter;
      outcome.residual = residual;
      FinalizeOutcome(problem, outcome);
      return outcome;
    }
  }
  throw Error(ErrorCode::kNonConvergence,
              "best-response iteration did not converge in " +
                  std::to_string(options.max_iters) +
                  " sweeps; last residual " + std::to_string(residual));
}

}  // namespace sflgame
