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

#ifndef SFLGAME_TESTS_ORACLES_H_
#define SFLGAME_TESTS_ORACLES_H_

// Reference computations used only by tests. Nothing here calls into the
// solvers under test; the library supplies only data types and the energy
// coefficients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "sflgame/follower.h"
#include "sflgame/leader.h"
#include "sflgame/model.h"

namespace sflgame::testing {

inline double LogUniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline double Total(const std::vector<double>& d) {
  return std::accumulate(d.begin(), d.end(), 0.0);
}

// Direct transcription of the client payoff.
inline double Payoff(const FollowerProblem& p, const std::vector<double>& d,
                     std::size_t n) {
  const FollowerClient& c = p.clients[n];
  return c.psi * p.r * d[n] / Total(d) - d[n] * c.h - c.i + c.offset;
}

// Random game with log-uniform H, psi and R and no caps.
inline FollowerProblem RandomGame(std::mt19937_64& rng, int n_min, int n_max) {
  std::uniform_int_distribution<int> count(n_min, n_max);
  FollowerProblem p;
  p.clients.resize(count(rng));
  for (FollowerClient& c : p.clients) {
    c.h = LogUniform(rng, 0.5, 50.0);
    c.psi = LogUniform(rng, 100.0, 10000.0);
    c.i = LogUniform(rng, 1.0, 1000.0);
  }
  p.r = LogUniform(rng, 1.0, 1000.0);
  p.d_req = 1000.0;
  return p;
}

// Equilibrium by bisection on the aggregate. At aggregate eta each client's
// first-order condition gives d_n(eta) = clamp(eta - eta^2 H_n / (psi_n R));
// the equilibrium aggregate is the unique root of sum_n d_n(eta) = eta.
inline std::vector<double> AggregateOracle(const FollowerProblem& p) {
  const auto contribution = [&](const FollowerClient& c, double eta) {
    return std::clamp(eta - eta * eta * c.h / (c.psi * p.r), 0.0, c.cap);
  };
  const auto excess = [&](double eta) {
    double s = 0.0;
    for (const FollowerClient& c : p.clients) s += contribution(c, eta);
    return s / eta - 1.0;
  };
  double lo = 0.0, hi = 0.0;
  for (const FollowerClient& c : p.clients) {
    hi = std::max(hi, c.psi * p.r / c.h);
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid > 0 && excess(mid) > 0 ? lo : hi) = mid;
  }
  const double eta = 0.5 * (lo + hi);
  std::vector<double> d;
  for (const FollowerClient& c : p.clients) d.push_back(contribution(c, eta));
  return d;
}

// Largest payoff client n can reach by deviating alone, on a log grid plus
// zero and the cap.
inline double BestDeviationPayoff(const FollowerProblem& p,
                                  std::vector<double> d, std::size_t n,
                                  int points = 400) {
  const double others = Total(d) - d[n];
  const double hi = std::min(p.clients[n].cap, 10.0 * (Total(d) + 1.0));
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= points; ++k) {
    const double x =
        k == 0 ? 0.0 : hi * std::pow(1e-9, 1.0 - double(k) / points);
    if (others + x <= 0) continue;
    d[n] = x;
    best = std::max(best, Payoff(p, d, n));
  }
  return best;
}

// Sum of client payoffs.
inline double Welfare(const FollowerProblem& p, const std::vector<double>& d) {
  double w = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) w += Payoff(p, d, n);
  return w;
}

// Maximum of `f` over a box by a tensor grid followed by repeated zooming
// around the best point. Intended for two or three dimensions.
inline double GridMaximum(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> lo, std::vector<double> hi, int points = 41,
    int zooms = 30) {
  const std::size_t dims = lo.size();
  const std::vector<double> box_lo = lo, box_hi = hi;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> arg = lo;
  for (int z = 0; z <= zooms; ++z) {
    std::vector<int> idx(dims, 0);
    std::vector<double> x(dims);
    while (true) {
      for (std::size_t j = 0; j < dims; ++j) {
        x[j] = lo[j] + (hi[j] - lo[j]) * idx[j] / (points - 1);
      }
      const double v = f(x);
      if (v > best) {
        best = v;
        arg = x;
      }
      std::size_t j = 0;
      while (j < dims && ++idx[j] == points) idx[j++] = 0;
      if (j == dims) break;
    }
    for (std::size_t j = 0; j < dims; ++j) {
      const double half = 2.0 * (hi[j] - lo[j]) / (points - 1);
      lo[j] = std::max(box_lo[j], arg[j] - half);
      hi[j] = std::min(box_hi[j], arg[j] + half);
    }
  }
  return best;
}

// Equilibrium aggregate for an interior game without binding caps, written
// out from the first-order conditions.
inline double InteriorAggregate(const FollowerProblem& p) {
  double cost = 0.0;
  for (const FollowerClient& c : p.clients) cost += c.h / c.psi;
  return (p.clients.size() - 1.0) * p.r / cost;
}

// Random leader problem whose follower games stay interior with slack caps.
// Returns false when the draw has a dropping client.
inline bool RandomLeader(std::mt19937_64& rng, LeaderProblem& out) {
  std::uniform_int_distribution<int> count(2, 10);
  out = LeaderProblem{};
  out.params.tau1 = LogUniform(rng, 100.0, 3000.0);
  out.params.tau2 = LogUniform(rng, 0.1, 200.0);
  out.params.d_req = LogUniform(rng, 200.0, 5000.0);
  out.clients.resize(count(rng));
  for (ClientProfile& c : out.clients) {
    c.cpu_freq = LogUniform(rng, 0.8e9, 2.5e9);
    c.psi = LogUniform(rng, 1500.0, 5000.0);
    c.dataset_cap = 1e12;
  }
  out.params.n_clients = static_cast<int>(out.clients.size());
  const FollowerProblem game = out.Follower(1.0, out.params.l_min);
  double cost = 0.0;
  for (const FollowerClient& c : game.clients) cost += c.h / c.psi;
  const double km1 = game.size() - 1.0;
  for (const FollowerClient& c : game.clients) {
    if (c.h / c.psi * km1 >= cost) return false;
  }
  return true;
}

struct GridSearchResult {
  int l_c = 0;
  double r = 0.0;
  double u_mo = -std::numeric_limits<double>::infinity();
  double max_step = 0.0;  // largest |U_MO| change between neighbours
};

// Owner utility on every integer cut and `r_points` evenly spaced incentives.
// Only valid when every client stays interior and no cap binds.
inline GridSearchResult StackelbergGrid(const LeaderProblem& problem,
                                        int r_points = 10000) {
  const SystemParams& sp = problem.params;
  GridSearchResult out;
  for (int l = sp.l_min; l <= sp.l_max; ++l) {
    const double load =
        sp.tau2 * flops_at_cut(problem.model, l) / sp.full_model_gflops;
    // The aggregate is linear in R, so one game per layer fixes the slope.
    const double slope = InteriorAggregate(problem.Follower(1.0, l));
    double prev = 0.0;
    for (int k = 0; k < r_points; ++k) {
      const double r = sp.r_min + (sp.r_max - sp.r_min) * k / (r_points - 1);
      const double u = sp.tau1 * std::log(1.0 + slope * r / sp.d_req) + load - r;
      if (k > 0) out.max_step = std::max(out.max_step, std::abs(u - prev));
      prev = u;
      if (u > out.u_mo) {
        out.u_mo = u;
        out.r = r;
        out.l_c = l;
      }
    }
  }
  return out;
}

}  // namespace sflgame::testing

#endif  // SFLGAME_TESTS_ORACLES_H_
