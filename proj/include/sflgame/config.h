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

#ifndef SFLGAME_CONFIG_H_
#define SFLGAME_CONFIG_H_

// A small TOML subset for scenario files.
//
// Supported: `key = value` pairs, `[table]` and `[[array-of-tables]]`
// headers (one level, no dotted keys), `#` comments, basic and literal
// strings, integers and floats (with `_` separators and exponents),
// booleans, and arrays, which may span lines.
//
// Quantities may carry SI units inside a string, e.g. "1.2 GHz" or
// "100 Mbit/s"; Quantity() converts them to the base unit of the field.

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sflgame::config {

struct Table;

struct Value {
  enum class Kind { kNumber, kBool, kString, kArray, kTable };

  Kind kind = Kind::kNumber;
  double number = 0.0;
  bool boolean = false;
  std::string text;
  std::vector<Value> items;      // kArray
  std::shared_ptr<Table> table;  // kTable
  int line = 0;
};

struct Table {
  std::vector<std::pair<std::string, Value>> entries;

  const Value* Find(std::string_view key) const;
};

// Throws Error(kInvalidArgument) with the line number on malformed input.
Table Parse(std::string_view text);

enum class Dimension {
  kNone,       // plain number
  kFrequency,  // Hz
  kRate,       // bit/s
  kBits,       // bit
  kPower,      // W
  kGflops,     // GFLOPs
};

// Number in the base unit of `dim`. `field` names the value in errors.
double Quantity(const Value& value, Dimension dim, const std::string& field);

std::string_view KindName(Value::Kind kind);

}  // namespace sflgame::config

#endif  // SFLGAME_CONFIG_H_
