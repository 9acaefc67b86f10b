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

#include "sflgame/config.h"

#include <charconv>
#include <cmath>
#include <span>
#include <string>

#include "sflgame/error.h"

namespace sflgame::config {
namespace {

struct Unit {
  std::string_view name;
  double scale;
};

constexpr Unit kFrequencyUnits[] = {
    {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}};
constexpr Unit kRateUnits[] = {
    {"bit/s", 1.0}, {"bps", 1.0},   {"kbit/s", 1e3}, {"kbps", 1e3},
    {"Mbit/s", 1e6}, {"Mbps", 1e6}, {"Gbit/s", 1e9}, {"Gbps", 1e9}};
constexpr Unit kBitUnits[] = {
    {"bit", 1.0}, {"kbit", 1e3}, {"Mbit", 1e6}, {"Gbit", 1e9}};
constexpr Unit kPowerUnits[] = {{"W", 1.0}, {"mW", 1e-3}, {"kW", 1e3}};
constexpr Unit kFlopUnits[] = {
    {"FLOPs", 1e-9}, {"MFLOPs", 1e-3}, {"GFLOPs", 1.0}, {"TFLOPs", 1e3}};

[[noreturn]] void Fail(int line, const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument,
              "config line " + std::to_string(line) + ": " + what);
}

bool IsBareKeyChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-';
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Table Run() {
    Table root;
    Table* current = &root;
    while (true) {
      SkipBlank(true);
      if (AtEnd()) break;
      if (Peek() == '[') {
        current = Header(root);
      } else {
        KeyValue(*current);
      }
      EndOfLine();
    }
    return root;
  }

 private:
  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }

  char Next() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  // Skips spaces, tabs and comments; also newlines when `newlines` is set.
  void SkipBlank(bool newlines) {
    while (!AtEnd()) {
      const char c = Peek();
      if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
        Next();
      } else if (c == '#') {
        while (!AtEnd() && Peek() != '\n') Next();
      } else {
        break;
      }
    }
  }

  void EndOfLine() {
    SkipBlank(false);
    if (AtEnd()) return;
    if (Peek() != '\n') Fail(line_, "unexpected text after value");
    Next();
  }

  void Expect(char c) {
    if (Peek() != c) Fail(line_, std::string("expected '") + c + "'");
    Next();
  }

  std::string Key() {
    if (Peek() == '"' || Peek() == '\'') return String();
    const std::size_t start = pos_;
    while (!AtEnd() && IsBareKeyChar(Peek())) Next();
    if (pos_ == start) Fail(line_, "expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  Table* Header(Table& root) {
    Next();
    const bool array = Peek() == '[';
    if (array) Next();
    SkipBlank(false);
    const std::string name = Key();
    SkipBlank(false);
    Expect(']');
    if (array) Expect(']');

    for (auto& [key, value] : root.entries) {
      if (key != name) continue;
      if (!array || value.kind != Value::Kind::kArray) {
        Fail(line_, "table '" + name + "' defined twice");
      }
      value.items.push_back(NewTable());
      return value.items.back().table.get();
    }
    if (array) {
      Value list;
      list.kind = Value::Kind::kArray;
      list.line = line_;
      list.items.push_back(NewTable());
      root.entries.emplace_back(name, std::move(list));
      return root.entries.back().second.items.back().table.get();
    }
    root.entries.emplace_back(name, NewTable());
    return root.entries.back().second.table.get();
  }

  Value NewTable() {
    Value v;
    v.kind = Value::Kind::kTable;
    v.table = std::make_shared<Table>();
    v.line = line_;
    return v;
  }

  void KeyValue(Table& table) {
    const int line = line_;
    std::string key = Key();
    SkipBlank(false);
    Expect('=');
    SkipBlank(false);
    Value value = ParseValue();
    if (table.Find(key)) Fail(line, "duplicate key '" + key + "'");
    table.entries.emplace_back(std::move(key), std::move(value));
  }

  Value ParseValue() {
    Value v;
    v.line = line_;
    const char c = Peek();
    if (c == '"' || c == '\'') {
      v.kind = Value::Kind::kString;
      v.text = String();
    } else if (c == '[') {
      v.kind = Value::Kind::kArray;
      Next();
      while (true) {
        SkipBlank(true);
        if (Peek() == ']') break;
        v.items.push_back(ParseValue());
        SkipBlank(true);
        if (Peek() == ',') {
          Next();
          continue;
        }
        if (Peek() != ']') Fail(line_, "expected ',' or ']' in array");
      }
      Next();
    } else if (text_.substr(pos_, 4) == "true") {
      v.kind = Value::Kind::kBool;
      v.boolean = true;
      pos_ += 4;
    } else if (text_.substr(pos_, 5) == "false") {
      v.kind = Value::Kind::kBool;
      pos_ += 5;
    } else {
      v.kind = Value::Kind::kNumber;
      v.number = Number();
    }
    return v;
  }

  double Number() {
    std::string digits;
    while (!AtEnd()) {
      const char c = Peek();
      const bool numeric = (c >= '0' && c <= '9') || c == '.' || c == 'e' ||
                           c == 'E' || c == '+' || c == '-' || c == '_';
      if (!numeric) break;
      if (c != '_') digits.push_back(c);
      Next();
    }
    std::string_view view = digits;
    if (!view.empty() && view.front() == '+') view.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(view.data(), view.data() + view.size(), value);
    if (view.empty() || ec != std::errc() || ptr != view.data() + view.size()) {
      Fail(line_, "malformed value");
    }
    return value;
  }

  std::string String() {
    const char quote = Next();
    std::string out;
    while (true) {
      if (AtEnd() || Peek() == '\n') Fail(line_, "unterminated string");
      const char c = Next();
      if (c == quote) break;
      if (c == '\\' && quote == '"') {
        if (AtEnd()) Fail(line_, "unterminated string");
        const char e = Next();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: Fail(line_, std::string("unknown escape \\") + e);
        }
        continue;
      }
      out.push_back(c);
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

std::span<const Unit> UnitsFor(Dimension dim) {
  switch (dim) {
    case Dimension::kFrequency: return kFrequencyUnits;
    case Dimension::kRate: return kRateUnits;
    case Dimension::kBits: return kBitUnits;
    case Dimension::kPower: return kPowerUnits;
    case Dimension::kGflops: return kFlopUnits;
    case Dimension::kNone: break;
  }
  return {};
}

}  // namespace

const Value* Table::Find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

Table Parse(std::string_view text) { return Parser(text).Run(); }

std::string_view KindName(Value::Kind kind) {
  switch (kind) {
    case Value::Kind::kNumber: return "number";
    case Value::Kind::kBool: return "boolean";
    case Value::Kind::kString: return "string";
    case Value::Kind::kArray: return "array";
    case Value::Kind::kTable: return "table";
  }
  return "unknown";
}

double Quantity(const Value& value, Dimension dim, const std::string& field) {
  if (value.kind == Value::Kind::kNumber) return value.number;
  if (value.kind != Value::Kind::kString) {
    throw Error(ErrorCode::kInvalidArgument,
                field + ": expected a number, got " +
                    std::string(KindName(value.kind)));
  }
  std::string_view s = value.text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double number = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), number);
  if (ec != std::errc() || ptr == s.data()) {
    throw Error(ErrorCode::kInvalidArgument,
                field + ": malformed quantity '" + value.text + "'");
  }
  std::string_view unit = s.substr(ptr - s.data());
  while (!unit.empty() && unit.front() == ' ') unit.remove_prefix(1);
  while (!unit.empty() && unit.back() == ' ') unit.remove_suffix(1);
  if (unit.empty()) return number;
  for (const Unit& u : UnitsFor(dim)) {
    if (u.name == unit) return number * u.scale;
  }
  throw Error(ErrorCode::kInvalidArgument,
              field + ": unit '" + std::string(unit) + "' not accepted here");
}

}  // namespace sflgame::config
