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

#ifndef SFLGAME_PRIVACY_H_
#define SFLGAME_PRIVACY_H_

// Measured privacy leakage and accuracy per (cut layer, noise level).
//
// Leakage is the SSIM between original images and those an inversion attack
// reconstructs from smashed data; lower means less leakage. Gaussian noise
// with standard deviation sigma on the smashed data is the usual route to
// (epsilon, delta)-differential privacy, which bounds how much the output
// distribution can move when one record changes. No calibration from sigma
// to (epsilon, delta) is attempted here.
//
// Only measured points are served. Nothing is interpolated.

#include <iosfwd>
#include <string>
#include <vector>

namespace sflgame {

struct PrivacyRecord {
  int l_c = 0;
  double sigma = 0.0;
  double accuracy = 0.0;  // percent
  double ssim = 0.0;
};

class PrivacyTable {
 public:
  // Six built-in measurements for l_c in {3, 12} and sigma in {0, 1, 2}.
  static PrivacyTable Builtin();

  // CSV with header `l_c,sigma,accuracy,ssim`. Rejects ssim outside [0, 1],
  // accuracy outside [0, 100], and duplicate (l_c, sigma) keys.
  static PrivacyTable FromCsv(std::istream& in);
  static PrivacyTable FromCsvFile(const std::string& path);

  explicit PrivacyTable(std::vector<PrivacyRecord> records);

  const std::vector<PrivacyRecord>& records() const { return records_; }

  // Throws kNotTabulated.
  const PrivacyRecord& lookup(int l_c, double sigma) const;

  // Smallest tabulated l_c whose ssim at `sigma` is <= threshold. Throws
  // kNotTabulated for an unknown sigma and kNoQualifyingCut when no layer
  // qualifies.
  int recommend_min_cut(double ssim_threshold, double sigma) const;

 private:
  std::vector<PrivacyRecord> records_;  // sorted by (l_c, sigma)
};

}  // namespace sflgame

#endif  // SFLGAME_PRIVACY_H_
