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

#include <cmath>
#include <fstream>
#include <utility>

#include "sflgame/csv.h"
#include "sflgame/error.h"

namespace sflgame {
namespace {

struct Line {
  double slope;
  double intercept;
};

// Centered normal equations; the caller guarantees at least two points.
Line LeastSquaresLine(const std::vector<std::pair<double, double>>& xy) {
  const double n = static_cast<double>(xy.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : xy) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (sxx == 0.0) {
    throw Error(ErrorCode::kDegenerateFit, "all samples share the same l_c");
  }
  const double slope = sxy / sxx;
  return {slope, mean_y - slope * mean_x};
}

void RequireTwo(std::size_t count, const char* what) {
  if (count < 2) {
    throw Error(ErrorCode::kInsufficientData,
                std::string("need at least 2 samples with ") + what +
                    ", got " + std::to_string(count));
  }
}

}  // namespace

LinearFit fit_flops_linear(std::span<const ProfileSample> samples) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& s : samples) {
    if (s.gflops) xy.emplace_back(s.l_c, *s.gflops);
  }
  RequireTwo(xy.size(), "gflops");
  const Line line = LeastSquaresLine(xy);

  double sse = 0.0;
  for (const auto& [x, y] : xy) {
    const double r = y - (line.slope * x + line.intercept);
    sse += r * r;
  }
  LinearFit fit;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.n_samples = static_cast<int>(xy.size());
  fit.rmse = std::sqrt(sse / fit.n_samples);
  return fit;
}

ExponentialFit fit_params_exponential(std::span<const ProfileSample> samples) {
  std::vector<std::pair<double, double>> xy;
  std::vector<std::pair<double, double>> raw;
  for (const auto& s : samples) {
    if (!s.mparams) continue;
    if (!(*s.mparams > 0)) {
      throw Error(ErrorCode::kNonPositiveSample,
                  "mparams must be positive at l_c=" + std::to_string(s.l_c));
    }
    xy.emplace_back(s.l_c, std::log(*s.mparams));
    raw.emplace_back(s.l_c, *s.mparams);
  }
  RequireTwo(xy.size(), "mparams");
  const Line line = LeastSquaresLine(xy);

  ExponentialFit fit;
  fit.scale = std::exp(line.intercept);
  fit.rate = line.slope;
  fit.n_samples = static_cast<int>(raw.size());
  double sse = 0.0;
  for (const auto& [x, y] : raw) {
    const double r = y - fit.scale * std::exp(fit.rate * x);
    sse += r * r;
  }
  fit.rmse = std::sqrt(sse / fit.n_samples);
  return fit;
}

FitReport fit_cost_model(std::span<const ProfileSample> samples) {
  const LinearFit flops = fit_flops_linear(samples);
  const ExponentialFit params = fit_params_exponential(samples);
  FitReport report;
  report.model.flops_slope = flops.slope;
  report.model.flops_intercept = flops.intercept;
  report.model.params_scale = params.scale;
  report.model.params_rate = params.rate;
  report.rmse_flops = flops.rmse;
  report.rmse_params = params.rmse;
  report.n_samples = static_cast<int>(samples.size());
  return report;
}

std::vector<ProfileSample> read_profile_csv(std::istream& in) {
  const csv::Table table = csv::Read(in);
  const std::size_t col_l = table.Column("l_c");
  const std::size_t col_f = table.Column("gflops");
  const std::size_t col_p = table.Column("mparams");

  std::vector<ProfileSample> samples;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = "row " + std::to_string(i + 2);
    const auto l_c = csv::ParseCell(row[col_l]);
    if (!l_c || *l_c < 1) {
      throw Error(ErrorCode::kInvalidArgument, where + ": l_c must be >= 1");
    }
    ProfileSample s;
    s.l_c = *l_c;
    s.gflops = csv::ParseCell(row[col_f]);
    s.mparams = csv::ParseCell(row[col_p]);
    if (!s.gflops && !s.mparams) {
      throw Error(ErrorCode::kInvalidArgument,
                  where + ": at least one measurement required");
    }
    if ((s.gflops && *s.gflops <= 0) || (s.mparams && *s.mparams <= 0)) {
      throw Error(ErrorCode::kNonPositiveSample,
                  where + ": measurements must be positive");
    }
    samples.push_back(s);
  }
  return samples;
}

std::vector<ProfileSample> read_profile_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  }
  return read_profile_csv(in);
}

}  // namespace sflgame
