// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace lncl::toml {

/// Error with 1-based source line where parsing or typed access failed.
struct TomlError : std::runtime_error {
  explicit TomlError(const std::string& message) : std::runtime_error(message) {}
};

/// A parsed TOML value covering the subset this project reads: strings,
/// integers, floats, booleans, arrays, and (inline or header) tables.
/// Dates, multi-line strings, and array-of-tables headers are not supported.
class Value {
 public:
  using Array = std::vector<Value>;
  using Table = std::map<std::string, Value>;

  Value() : v_(Table{}) {}
  explicit Value(std::string s) : v_(std::move(s)) {}
  explicit Value(std::int64_t i) : v_(i) {}
  explicit Value(double d) : v_(d) {}
  explicit Value(bool b) : v_(b) {}
  explicit Value(Array a) : v_(std::move(a)) {}
  explicit Value(Table t) : v_(std::move(t)) {}

  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }
  bool is_table() const { return std::holds_alternative<Table>(v_); }

  const std::string& as_string() const;
  std::int64_t as_integer() const;
  /// Accepts both float and integer values.
  double as_number() const;
  bool as_bool() const;
  const Array& as_array() const;
  const Table& as_table() const;
  Table& as_table();

 private:
  std::variant<std::string, std::int64_t, double, bool, Array, Table> v_;
};

/// Parses a document into its root table. Throws TomlError with a line
/// reference on malformed input.
Value::Table parse(const std::string& text);
Value::Table parse_file(const std::string& path);

}  // namespace lncl::toml
