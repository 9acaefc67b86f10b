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

#ifndef SFLGAME_REGRESSION_H_
#define SFLGAME_REGRESSION_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sflgame/model.h"

namespace sflgame {

// One profiling measurement at a cut layer. Either measurement may be absent.
struct ProfileSample {
  double l_c = 1.0;
  std::optional<double> gflops;
  std::optional<double> mparams;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rmse = 0.0;
  int n_samples = 0;
};

struct ExponentialFit {
  double scale = 0.0;
  double rate = 0.0;
  double rmse = 0.0;  // in Mparams, not log space
  int n_samples = 0;
};

struct FitReport {
  CutCostModel model;
  double rmse_flops = 0.0;
  double rmse_params = 0.0;
  int n_samples = 0;
};

// Ordinary least squares for gflops = a*l_c + b over samples carrying a
// gflops value.
LinearFit fit_flops_linear(std::span<const ProfileSample> samples);

// Log-linear least squares for mparams = c*exp(d*l_c).
ExponentialFit fit_params_exponential(std::span<const ProfileSample> samples);

// Runs both fits on one sample set.
FitReport fit_cost_model(std::span<const ProfileSample> samples);

// CSV with header `l_c,gflops,mparams`; an empty cell is an absent value.
std::vector<ProfileSample> read_profile_csv(std::istream& in);
std::vector<ProfileSample> read_profile_csv_file(const std::string& path);

}  // namespace sflgame

#endif  // SFLGAME_REGRESSION_H_
