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

#include "sflgame/welfare.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "sflgame/error.h"

namespace sflgame {
namespace {

constexpr int kStarts = 16;
constexpr int kMaxIters = 5000;
constexpr double kArmijo = 1e-4;
constexpr double kGradTol = 1e-8;
constexpr std::uint64_t kSeed = 0x5f1a;

void Project(const WelfareProblem& problem, std::vector<double>& d) {
  for (std::size_t n = 0; n < d.size(); ++n) {
    d[n] = std::clamp(d[n], problem.lower[n], problem.upper[n]);
  }
}

double Norm(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += (a[n] - b[n]) * (a[n] - b[n]);
  return std::sqrt(s);
}

std::vector<std::vector<double>> DefaultStarts(const WelfareProblem& problem) {
  const std::size_t n_clients = problem.lower.size();
  std::vector<std::vector<double>> starts;
  starts.push_back(problem.lower);
  starts.push_back(problem.upper);
  std::vector<double> centroid(n_clients);
  for (std::size_t n = 0; n < n_clients; ++n) {
    centroid[n] = 0.5 * (problem.lower[n] + problem.upper[n]);
  }
  starts.push_back(std::move(centroid));
  for (std::size_t n = 0; n < n_clients && starts.size() < kStarts; ++n) {
    std::vector<double> corner = problem.lower;
    corner[n] = problem.upper[n];
    starts.push_back(std::move(corner));
  }
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (starts.size() < kStarts) {
    std::vector<double> point(n_clients);
    for (std::size_t n = 0; n < n_clients; ++n) {
      point[n] = problem.lower[n] +
                 unit(rng) * (problem.upper[n] - problem.lower[n]);
    }
    starts.push_back(std::move(point));
  }
  return starts;
}

WelfareOptimum Ascend(const WelfareProblem& problem, std::vector<double> d) {
  Project(problem, d);
  double w = social_welfare(problem, d);
  double span = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    span = std::max(span, problem.upper[n] - problem.lower[n]);
  }
  if (span == 0.0) return {std::move(d), w};

  std::vector<double> trial(d.size());
  double step = -1.0;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    const std::vector<double> g = welfare_gradient(problem, d);
    for (std::size_t n = 0; n < d.size(); ++n) trial[n] = d[n] + g[n];
    Project(problem, trial);
    if (Norm(trial, d) < kGradTol) break;

    if (step < 0.0) {
      double g_max = 0.0;
      for (const double v : g) g_max = std::max(g_max, std::abs(v));
      step = span / g_max;
    } else {
      step *= 2.0;
    }
    bool accepted = false;
    for (int k = 0; k < 200 && !accepted; ++k, step *= 0.5) {
      for (std::size_t n = 0; n < d.size(); ++n) trial[n] = d[n] + step * g[n];
      Project(problem, trial);
      double gain = 0.0;
      for (std::size_t n = 0; n < d.size(); ++n) gain += g[n] * (trial[n] - d[n]);
      if (gain <= 0.0) break;
      const double w_trial = social_welfare(problem, trial);
      if (w_trial >= w + kArmijo * gain) {
        d.swap(trial);
        w = w_trial;
        accepted = true;
      }
    }
    if (!accepted) break;
  }
  return {std::move(d), w};
}

}  // namespace

WelfareProblem WelfareProblem::FromGame(const FollowerProblem& game) {
  WelfareProblem problem;
  problem.game = game;
  const double floor = game.d_req / static_cast<double>(game.size());
  for (const FollowerClient& c : game.clients) {
    problem.lower.push_back(floor);
    problem.upper.push_back(c.cap);
  }
  return problem;
}

void WelfareProblem::Validate() const {
  game.Validate();
  if (lower.size() != game.size() || upper.size() != game.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "welfare bounds must have one entry per client");
  }
  for (std::size_t n = 0; n < lower.size(); ++n) {
    if (!(lower[n] >= 0) || !(lower[n] <= upper[n]) ||
        !std::isfinite(upper[n])) {
      throw Error(ErrorCode::kInfeasibleBox,
                  "client " + std::to_string(n) +
                      " needs 0 <= lower <= upper < inf");
    }
  }
}

double social_welfare(const WelfareProblem& problem,
                      std::span<const double> d) {
  const FollowerProblem& game = problem.game;
  if (d.size() != game.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "contribution vector size does not match the game");
  }
  const double total = std::accumulate(d.begin(), d.end(), 0.0);
  if (total == 0.0) {
    throw Error(ErrorCode::kZeroAggregate,
                "welfare undefined when all contributions are zero");
  }
  double weighted = 0.0, cost = 0.0, offset = 0.0;
  for (std::size_t n = 0; n < d.size(); ++n) {
    const FollowerClient& c = game.clients[n];
    weighted += c.psi * d[n];
    cost += c.h * d[n] + c.i;
    offset += c.offset;
  }
  return game.r * weighted / total - cost + offset;
}

std::vector<double> welfare_gradient(const WelfareProblem& problem,
                                     std::span<const double> d) {
  const FollowerProblem& game = problem.game;
  const double total = std::accumulate(d.begin(), d.end(), 0.0);
  if (total == 0.0) {
    throw Error(ErrorCode::kZeroAggregate,
                "welfare undefined when all contributions are zero");
  }
  // Residual form keeps homogeneous weights at an exact zero incentive term.
  std::vector<double> g(d.size());
  for (std::size_t n = 0; n < d.size(); ++n) {
    double spread = 0.0;
    for (std::size_t l = 0; l < d.size(); ++l) {
      spread += (game.clients[n].psi - game.clients[l].psi) * d[l];
    }
    g[n] = game.r * spread / (total * total) - game.clients[n].h;
  }
  return g;
}

WelfareOptimum social_optimum(
    const WelfareProblem& problem,
    std::span<const std::vector<double>> extra_starts) {
  problem.Validate();
  std::vector<std::vector<double>> starts = DefaultStarts(problem);
  for (const auto& s : extra_starts) {
    if (s.size() != problem.lower.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "start vector size does not match the game");
    }
    starts.push_back(s);
  }
  WelfareOptimum best;
  best.welfare = -std::numeric_limits<double>::infinity();
  for (auto& start : starts) {
    WelfareOptimum candidate = Ascend(problem, std::move(start));
    if (candidate.welfare > best.welfare) best = std::move(candidate);
  }
  return best;
}

PoAReport price_of_anarchy(const WelfareProblem& problem) {
  problem.Validate();
  PoAReport report;
  report.d_ne_raw = closed_form_ne(problem.game).d_star;
  report.d_ne = report.d_ne_raw;
  Project(problem, report.d_ne);
  report.welfare_ne = social_welfare(problem, report.d_ne);
  if (!(report.welfare_ne > 0)) {
    throw Error(ErrorCode::kNonPositiveWelfare,
                "welfare at equilibrium is " +
                    std::to_string(report.welfare_ne) +
                    "; raise the utility offset S");
  }
  const std::vector<std::vector<double>> extra = {report.d_ne};
  WelfareOptimum opt = social_optimum(problem, extra);
  report.d_opt = std::move(opt.d);
  report.welfare_opt = opt.welfare;
  report.poa = report.welfare_opt / report.welfare_ne;
  return report;
}

}  // namespace sflgame
