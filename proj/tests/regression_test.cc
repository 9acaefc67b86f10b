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


#include "sflgame/regression.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sflgame/error.h"

namespace sflgame {
namespace {

std::vector<ProfileSample> Exact(double a, double b, double c, double d) {
  std::vector<ProfileSample> s;
  for (int l = 1; l <= 12; ++l) {
    s.push_back({double(l), a * l + b, c * std::exp(d * l)});
  }
  return s;
}

TEST(Fit, RecoversExactCoefficients) {
  const FitReport f = fit_cost_model(Exact(0.3779, -0.212, 0.1098, 0.4711));
  EXPECT_NEAR(f.model.flops_slope, 0.3779, 1e-12);
  EXPECT_NEAR(f.model.flops_intercept, -0.212, 1e-12);
  EXPECT_NEAR(f.model.params_scale, 0.1098, 1e-12);
  EXPECT_NEAR(f.model.params_rate, 0.4711, 1e-12);
  EXPECT_LE(f.rmse_flops, 1e-12);
  EXPECT_LE(f.rmse_params, 1e-12);
  EXPECT_EQ(f.n_samples, 12);
}

TEST(Fit, LinearMatchesNormalEquations) {
  // Points (1,1), (2,2), (3,2): slope 0.5, intercept 2/3.
  const std::vector<ProfileSample> s = {{1, 1.0, {}}, {2, 2.0, {}},
                                        {3, 2.0, {}}};
  const LinearFit f = fit_flops_linear(s);
  EXPECT_NEAR(f.slope, 0.5, 1e-15);
  EXPECT_NEAR(f.intercept, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(f.rmse, std::sqrt((1.0 / 36 + 1.0 / 9 + 1.0 / 36) / 3), 1e-15);
}

TEST(Fit, ErrorsOnBadData) {
  const auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  const std::vector<ProfileSample> one = {{3, 1.0, 1.0}};
  EXPECT_EQ(code([&] { fit_flops_linear(one); }),
            ErrorCode::kInsufficientData);
  const std::vector<ProfileSample> same = {{3, 1.0, 1.0}, {3, 2.0, 2.0}};
  EXPECT_EQ(code([&] { fit_flops_linear(same); }), ErrorCode::kDegenerateFit);
  const std::vector<ProfileSample> neg = {{1, 1.0, 1.0}, {2, 2.0, -1.0}};
  EXPECT_EQ(code([&] { fit_params_exponential(neg); }),
            ErrorCode::kNonPositiveSample);
}

TEST(Fit, CsvAllowsMissingColumns) {
  std::istringstream in("l_c,gflops,mparams\n1,0.2,\n2,0.5,0.3\n3,,0.5\n");
  const auto samples = read_profile_csv(in);
  ASSERT_EQ(samples.size(), 3u);
  EXPECT_FALSE(samples[0].mparams.has_value());
  EXPECT_FALSE(samples[2].gflops.has_value());
  EXPECT_EQ(fit_flops_linear(samples).n_samples, 2);
  EXPECT_EQ(fit_params_exponential(samples).n_samples, 2);
}

TEST(Fit, ExactLineAndConstantExponential) {
  const std::vector<ProfileSample> line = {{1, 1.0, 4.0}, {2, 2.0, 4.0},
                                           {3, 3.0, 4.0}};
  const LinearFit f = fit_flops_linear(line);
  EXPECT_NEAR(f.slope, 1.0, 1e-15);
  EXPECT_NEAR(f.intercept, 0.0, 1e-15);
  EXPECT_EQ(f.rmse, 0.0);
  const ExponentialFit e = fit_params_exponential(line);
  EXPECT_NEAR(e.scale, 4.0, 1e-14);
  EXPECT_NEAR(e.rate, 0.0, 1e-15);
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return 0.5 * (v[(v.size() - 1) / 2] + v[v.size() / 2]);
}

TEST(FitProperty, AdditiveNoiseOnFlops) {
  std::vector<double> slope_err, rmse;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<ProfileSample> s;
    for (int l = 1; l <= 12; ++l) {
      s.push_back({double(l), 0.3779 * l - 0.212 + noise(rng), {}});
    }
    const LinearFit f = fit_flops_linear(s);
    slope_err.push_back(std::abs(f.slope - 0.3779));
    rmse.push_back(f.rmse);
  }
  EXPECT_LE(Median(slope_err), 0.01);
  // The fit absorbs two degrees of freedom: E[rmse^2] = sigma^2 (n - 2) / n.
  EXPECT_NEAR(Median(rmse), 0.01, 0.003);
}

TEST(FitProperty, MultiplicativeNoiseOnParams) {
  std::vector<double> scale_err, rate_err;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(2000 + seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<ProfileSample> s;
    for (int l = 1; l <= 12; ++l) {
      s.push_back(
          {double(l), {}, 0.1098 * std::exp(0.4711 * l) * (1 + noise(rng))});
    }
    const ExponentialFit f = fit_params_exponential(s);
    scale_err.push_back(std::abs(f.scale / 0.1098 - 1));
    rate_err.push_back(std::abs(f.rate - 0.4711));
  }
  EXPECT_LE(Median(scale_err), 0.02);
  EXPECT_LE(Median(rate_err), 0.005);
}

TEST(FitProperty, SampleOrderDoesNotMatter) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<ProfileSample> s;
  for (int l = 1; l <= 12; ++l) {
    s.push_back({double(l), 0.4 * l + 0.1 + noise(rng),
                 0.1 * std::exp(0.5 * l) * (1 + noise(rng))});
  }
  const FitReport base = fit_cost_model(s);
  for (int k = 0; k < 20; ++k) {
    std::shuffle(s.begin(), s.end(), rng);
    const FitReport f = fit_cost_model(s);
    EXPECT_NEAR(f.model.flops_slope, base.model.flops_slope, 1e-12);
    EXPECT_NEAR(f.model.flops_intercept, base.model.flops_intercept, 1e-12);
    EXPECT_NEAR(f.model.params_scale, base.model.params_scale, 1e-12);
    EXPECT_NEAR(f.model.params_rate, base.model.params_rate, 1e-12);
  }
}

TEST(FitProperty, LinearResidualsAreOrthogonal) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ProfileSample> s;
    for (int l = 1; l <= 12; ++l) s.push_back({double(l), l + noise(rng), {}});
    const LinearFit f = fit_flops_linear(s);
    double sum = 0.0, dot = 0.0;
    for (const auto& p : s) {
      const double e = *p.gflops - (f.slope * p.l_c + f.intercept);
      sum += e;
      dot += e * p.l_c;
    }
    EXPECT_NEAR(sum, 0.0, 1e-10);
    EXPECT_NEAR(dot, 0.0, 1e-9);
  }
}

TEST(FitProperty, LogResidualsAreOrthogonal) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<ProfileSample> s;
  for (int l = 1; l <= 12; ++l) {
    s.push_back({double(l), {}, 0.2 * std::exp(0.3 * l + noise(rng))});
  }
  const ExponentialFit f = fit_params_exponential(s);
  double sum = 0.0, dot = 0.0;
  for (const auto& p : s) {
    const double e = std::log(*p.mparams) - std::log(f.scale) - f.rate * p.l_c;
    sum += e;
    dot += e * p.l_c;
  }
  EXPECT_NEAR(sum, 0.0, 1e-10);
  EXPECT_NEAR(dot, 0.0, 1e-9);
}

}  // namespace
}  // namespace sflgame
