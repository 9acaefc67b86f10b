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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "sflgame/error.h"
#include "oracles.h"

namespace sflgame {
namespace {

// Random game with finite caps and a box that contains part of the
// equilibrium's neighbourhood.
WelfareProblem RandomBoxGame(std::mt19937_64& rng, int n_min, int n_max) {
  FollowerProblem game = testing::RandomGame(rng, n_min, n_max);
  const double eta = testing::InteriorAggregate(game);
  for (FollowerClient& c : game.clients) {
    c.cap = testing::LogUniform(rng, 0.05, 2.0) * eta;
    c.offset = testing::LogUniform(rng, 1e3, 1e6);
  }
  game.d_req = testing::LogUniform(rng, 1e-3, 0.05) * eta * game.size();
  return WelfareProblem::FromGame(game);
}

double OracleOptimum(const WelfareProblem& w) {
  return testing::GridMaximum(
      [&](const std::vector<double>& d) {
        return testing::Welfare(w.game, d);
      },
      w.lower, w.upper);
}

TEST(Welfare, BoxFromGame) {
  FollowerProblem game;
  game.clients.assign(4, FollowerClient{2.0, 1.0, 3.0, 500.0, 0.0});
  game.d_req = 100.0;
  game.r = 10.0;
  const WelfareProblem w = WelfareProblem::FromGame(game);
  EXPECT_EQ(w.lower, std::vector<double>(4, 25.0));
  EXPECT_EQ(w.upper, std::vector<double>(4, 500.0));
}

TEST(Welfare, HomogeneousOptimumSitsOnLowerBounds) {
  FollowerProblem game;
  game.clients.assign(5, FollowerClient{19.2, 100.0, 2800.0, 1e4, 1e6});
  game.d_req = 2000.0;
  game.r = 200.0;
  const WelfareProblem w = WelfareProblem::FromGame(game);
  const WelfareOptimum opt = social_optimum(w);
  for (const double d : opt.d) EXPECT_EQ(d, 400.0);
  // psi R - sum(H d + I) + sum(S).
  EXPECT_NEAR(opt.welfare, 2800.0 * 200 - 5 * (19.2 * 400 + 100) + 5e6,
              1e-6);
}

TEST(Welfare, ReferenceValues) {
  FollowerProblem game;
  game.clients.assign(3, FollowerClient{1.0, 2.0, 5.0, 100.0, 4.0});
  game.r = 10.0;
  game.d_req = 3.0;
  const WelfareProblem w = WelfareProblem::FromGame(game);
  // Shares sum to one, so the incentive term is psi R for any profile.
  for (const auto& d : {std::vector<double>{1, 2, 3},
                        std::vector<double>{50, 0.5, 7}}) {
    EXPECT_NEAR(social_welfare(w, d),
                50.0 - testing::Total(d) - 6.0 + 12.0, 1e-12);
  }
  FollowerProblem pair;
  pair.clients.assign(2, FollowerClient{1.0, 2.0, 5.0, 100.0, 4.0});
  pair.r = 10.0;
  const WelfareProblem w2 = WelfareProblem::FromGame(pair);
  const std::vector<double> x = {3.0, 3.0};
  EXPECT_DOUBLE_EQ(social_welfare(w2, x), 2 * client_utility(pair, x, 0));
}

TEST(Welfare, DegenerateBox) {
  std::mt19937_64 rng(306);
  WelfareProblem w = RandomBoxGame(rng, 3, 3);
  w.upper = w.lower;
  const WelfareOptimum opt = social_optimum(w);
  EXPECT_EQ(opt.d, w.lower);
  EXPECT_EQ(price_of_anarchy(w).poa, 1.0);
}

TEST(WelfareProperty, MatchesSumOfClientUtilities) {
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 100; ++trial) {
    const WelfareProblem w = RandomBoxGame(rng, 2, 12);
    std::vector<double> d(w.lower.size());
    double sum = 0.0;
    for (std::size_t n = 0; n < d.size(); ++n) {
      d[n] = testing::LogUniform(rng, w.lower[n], w.upper[n]);
    }
    for (std::size_t n = 0; n < d.size(); ++n) {
      sum += client_utility(w.game, d, n);
    }
    EXPECT_NEAR(social_welfare(w, d), sum, 1e-12 * std::abs(sum));
  }
}

TEST(WelfareProperty, OptimumWithinCoarseGridCell) {
  std::mt19937_64 rng(308);
  for (int trial = 0; trial < 40; ++trial) {
    const WelfareProblem w = RandomBoxGame(rng, 2, 3);
    const double opt = social_optimum(w).welfare;
    const double grid = testing::GridMaximum(
        [&](const std::vector<double>& d) {
          return testing::Welfare(w.game, d);
        },
        w.lower, w.upper, 50, 0);
    EXPECT_GE(opt, grid - 1e-9 * std::abs(grid));
  }
}

TEST(Welfare, GradientMatchesFiniteDifference) {
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 200; ++trial) {
    const WelfareProblem w = RandomBoxGame(rng, 2, 8);
    std::vector<double> d(w.lower.size());
    for (std::size_t n = 0; n < d.size(); ++n) {
      d[n] = 0.5 * (w.lower[n] + w.upper[n]);
    }
    const std::vector<double> g = welfare_gradient(w, d);
    for (std::size_t n = 0; n < d.size(); ++n) {
      const double h = 1e-4 * d[n];
      std::vector<double> lo = d, hi = d;
      lo[n] -= h;
      hi[n] += h;
      const double fd = (social_welfare(w, hi) - social_welfare(w, lo)) / (2 * h);
      EXPECT_NEAR(g[n], fd, 1e-4 * (std::abs(g[n]) + w.game.clients[n].h));
    }
  }
}

TEST(Welfare, MatchesDirectSum) {
  std::mt19937_64 rng(302);
  const WelfareProblem w = RandomBoxGame(rng, 3, 3);
  const std::vector<double> d = w.upper;
  EXPECT_NEAR(social_welfare(w, d), testing::Welfare(w.game, d),
              1e-9 * std::abs(testing::Welfare(w.game, d)));
}

TEST(Welfare, RejectsInfeasibleBox) {
  FollowerProblem game;
  game.clients.assign(
      2, FollowerClient{1.0, 0.0, 1.0,
                        std::numeric_limits<double>::infinity(), 0.0});
  game.d_req = 1.0;
  const auto code = [](const WelfareProblem& w) {
    try {
      social_optimum(w);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code(WelfareProblem::FromGame(game)), ErrorCode::kInfeasibleBox);
  game.clients[0].cap = game.clients[1].cap = 0.1;
  EXPECT_EQ(code(WelfareProblem::FromGame(game)), ErrorCode::kInfeasibleBox);
}

TEST(Welfare, NonPositiveWelfareIsReported) {
  FollowerProblem game;
  game.clients.assign(3, FollowerClient{1.0, 1e9, 1.0, 100.0, 0.0});
  game.d_req = 3.0;
  game.r = 10.0;
  try {
    price_of_anarchy(WelfareProblem::FromGame(game));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPositiveWelfare);
  }
}

TEST(WelfareProperty, OptimumMatchesGridOracle) {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 60; ++trial) {
    const WelfareProblem w = RandomBoxGame(rng, 2, 3);
    const WelfareOptimum opt = social_optimum(w);
    const double oracle = OracleOptimum(w);
    EXPECT_NEAR(opt.welfare, oracle, 1e-7 * std::abs(oracle));
    for (std::size_t n = 0; n < opt.d.size(); ++n) {
      EXPECT_GE(opt.d[n], w.lower[n]);
      EXPECT_LE(opt.d[n], w.upper[n]);
    }
  }
}

TEST(WelfareProperty, PriceOfAnarchyAtLeastOne) {
  std::mt19937_64 rng(304);
  for (int trial = 0; trial < 200; ++trial) {
    const PoAReport r = price_of_anarchy(RandomBoxGame(rng, 2, 12));
    EXPECT_GE(r.poa, 1.0);
    EXPECT_GE(r.welfare_opt, r.welfare_ne);
    EXPECT_NEAR(r.poa, r.welfare_opt / r.welfare_ne, 1e-15 * r.poa);
  }
}

TEST(WelfareProperty, PermutationInvariant) {
  std::mt19937_64 rng(305);
  for (int trial = 0; trial < 50; ++trial) {
    WelfareProblem w = RandomBoxGame(rng, 2, 6);
    const double a = social_optimum(w).welfare;
    std::reverse(w.game.clients.begin(), w.game.clients.end());
    std::reverse(w.lower.begin(), w.lower.end());
    std::reverse(w.upper.begin(), w.upper.end());
    EXPECT_NEAR(social_optimum(w).welfare, a, 1e-9 * std::abs(a));
  }
}

}  // namespace
}  // namespace sflgame
