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

#ifndef SFLGAME_CSV_H_
#define SFLGAME_CSV_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sflgame::csv {

// Minimal comma-separated reader: no quoting, whitespace around cells is
// trimmed, blank lines are skipped.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index for `name`, or throws kInvalidArgument.
  std::size_t Column(std::string_view name) const;
};

Table Read(std::istream& in);

std::vector<std::string> SplitLine(std::string_view line);

// Parses a cell as a double; an empty cell yields nullopt. Throws
// kInvalidArgument on malformed input.
std::optional<double> ParseCell(std::string_view cell);

// 12 significant digits, `.` decimal separator, locale independent.
std::string FormatNumber(double value);

}  // namespace sflgame::csv

#endif  // SFLGAME_CSV_H_
