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

#include "sflgame/privacy.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sflgame/csv.h"
#include "sflgame/error.h"

namespace sflgame {
namespace {

std::string Key(int l_c, double sigma) {
  return "(l_c=" + std::to_string(l_c) + ", sigma=" + csv::FormatNumber(sigma) +
         ")";
}

}  // namespace

PrivacyTable PrivacyTable::Builtin() {
  return PrivacyTable({
      {3, 0.0, 90.8, 0.9563},
      {3, 1.0, 90.1, 0.7692},
      {3, 2.0, 88.0, 0.5194},
      {12, 0.0, 92.1, 0.2721},
      {12, 1.0, 91.8, 0.1606},
      {12, 2.0, 92.0, 0.0921},
  });
}

PrivacyTable::PrivacyTable(std::vector<PrivacyRecord> records)
    : records_(std::move(records)) {
  for (const PrivacyRecord& r : records_) {
    const std::string where = Key(r.l_c, r.sigma);
    if (r.l_c < 1) {
      throw Error(ErrorCode::kInvalidArgument, where + ": l_c must be >= 1");
    }
    if (!(r.sigma >= 0)) {
      throw Error(ErrorCode::kInvalidArgument, where + ": sigma must be >= 0");
    }
    if (!(r.ssim >= 0 && r.ssim <= 1)) {
      throw Error(ErrorCode::kInvalidArgument, where + ": ssim outside [0, 1]");
    }
    if (!(r.accuracy >= 0 && r.accuracy <= 100)) {
      throw Error(ErrorCode::kInvalidArgument,
                  where + ": accuracy outside [0, 100]");
    }
  }
  std::sort(records_.begin(), records_.end(),
            [](const PrivacyRecord& a, const PrivacyRecord& b) {
              return a.l_c != b.l_c ? a.l_c < b.l_c : a.sigma < b.sigma;
            });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].l_c == records_[i - 1].l_c &&
        records_[i].sigma == records_[i - 1].sigma) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate entry " +
                      Key(records_[i].l_c, records_[i].sigma));
    }
  }
}

PrivacyTable PrivacyTable::FromCsv(std::istream& in) {
  const csv::Table table = csv::Read(in);
  const std::size_t col_l = table.Column("l_c");
  const std::size_t col_s = table.Column("sigma");
  const std::size_t col_a = table.Column("accuracy");
  const std::size_t col_q = table.Column("ssim");
  std::vector<PrivacyRecord> records;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto l_c = csv::ParseCell(row[col_l]);
    const auto sigma = csv::ParseCell(row[col_s]);
    const auto accuracy = csv::ParseCell(row[col_a]);
    const auto ssim = csv::ParseCell(row[col_q]);
    if (!l_c || !sigma || !accuracy || !ssim || *l_c != std::floor(*l_c)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(i + 2) +
                      ": every cell is required and l_c must be an integer");
    }
    records.push_back({static_cast<int>(*l_c), *sigma, *accuracy, *ssim});
  }
  return PrivacyTable(std::move(records));
}

PrivacyTable PrivacyTable::FromCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  }
  return FromCsv(in);
}

const PrivacyRecord& PrivacyTable::lookup(int l_c, double sigma) const {
  for (const PrivacyRecord& r : records_) {
    if (r.l_c == l_c && r.sigma == sigma) return r;
  }
  throw Error(ErrorCode::kNotTabulated, Key(l_c, sigma) + " is not tabulated");
}

int PrivacyTable::recommend_min_cut(double ssim_threshold, double sigma) const {
  if (!(ssim_threshold >= 0 && ssim_threshold <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in [0, 1]");
  }
  bool seen = false;
  for (const PrivacyRecord& r : records_) {
    if (r.sigma != sigma) continue;
    seen = true;
    if (r.ssim <= ssim_threshold) return r.l_c;
  }
  if (!seen) {
    throw Error(ErrorCode::kNotTabulated,
                "sigma=" + csv::FormatNumber(sigma) + " is not tabulated");
  }
  throw Error(ErrorCode::kNoQualifyingCut,
              "no tabulated cut layer reaches ssim <= " +
                  csv::FormatNumber(ssim_threshold) + " at sigma=" +
                  csv::FormatNumber(sigma));
}

}  // namespace sflgame
