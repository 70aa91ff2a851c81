// SPDX-License-Identifier: Apache-2.0
#include "lncl/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace lncl::toml {

const std::string& Value::as_string() const {
  if (!is_string()) throw TomlError("expected a string value");
  return std::get<std::string>(v_);
}

std::int64_t Value::as_integer() const {
  if (!is_integer()) throw TomlError("expected an integer value");
  return std::get<std::int64_t>(v_);
}

double Value::as_number() const {
  if (is_integer()) return static_cast<double>(std::get<std::int64_t>(v_));
  if (!is_float()) throw TomlError("expected a numeric value");
  return std::get<double>(v_);
}

bool Value::as_bool() const {
  if (!is_bool()) throw TomlError("expected a boolean value");
  return std::get<bool>(v_);
}

const Value::Array& Value::as_array() const {
  if (!is_array()) throw TomlError("expected an array value");
  return std::get<Array>(v_);
}

const Value::Table& Value::as_table() const {
  if (!is_table()) throw TomlError("expected a table value");
  return std::get<Table>(v_);
}

Value::Table& Value::as_table() {
  if (!is_table()) throw TomlError("expected a table value");
  return std::get<Table>(v_);
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Value::Table parse_document() {
    Value::Table root;
    Value::Table* current = &root;
    skip_space();
    while (!done()) {
      if (peek() == '[') {
        current = open_table(root);
      } else {
        auto [key, value] = parse_keyval();
        insert(*current, key, std::move(value));
      }
      skip_space();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw TomlError("line " + std::to_string(line_) + ": " + message);
  }

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char take() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  // Whitespace, newlines, and #-comments are all insignificant between
  // tokens in this subset.
  void skip_space() {
    while (!done()) {
      const char c = peek();
      if (c == '#') {
        while (!done() && peek() != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        return;
      }
    }
  }

  static bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string parse_key_part() {
    skip_space();
    if (done()) fail("expected a key");
    if (peek() == '"') return parse_basic_string();
    std::string key;
    while (!done() && is_bare_key_char(peek())) key.push_back(take());
    if (key.empty()) fail("expected a key");
    return key;
  }

  std::vector<std::string> parse_dotted_key() {
    std::vector<std::string> parts{parse_key_part()};
    skip_space();
    while (!done() && peek() == '.') {
      take();
      parts.push_back(parse_key_part());
      skip_space();
    }
    return parts;
  }

  Value::Table* open_table(Value::Table& root) {
    take();  // '['
    if (!done() && peek() == '[') fail("array-of-tables headers are not supported");
    const std::vector<std::string> parts = parse_dotted_key();
    skip_space();
    if (done() || take() != ']') fail("expected ']' after table header");
    std::string joined;
    for (const std::string& part : parts) joined += part + '\x1f';
    if (!seen_headers_.insert(joined).second)
      fail("duplicate table header");
    Value::Table* table = &root;
    for (const std::string& part : parts) {
      auto [it, inserted] = table->try_emplace(part, Value(Value::Table{}));
      if (!it->second.is_table()) fail("key '" + part + "' is not a table");
      table = &it->second.as_table();
    }
    return table;
  }

  std::pair<std::vector<std::string>, Value> parse_keyval() {
    std::vector<std::string> key = parse_dotted_key();
    skip_space();
    if (done() || take() != '=') fail("expected '=' after key");
    return {std::move(key), parse_value()};
  }

  void insert(Value::Table& table, const std::vector<std::string>& key, Value value) {
    Value::Table* target = &table;
    for (std::size_t i = 0; i + 1 < key.size(); ++i) {
      auto [it, inserted] = target->try_emplace(key[i], Value(Value::Table{}));
      if (!it->second.is_table()) fail("key '" + key[i] + "' is not a table");
      target = &it->second.as_table();
    }
    if (!target->emplace(key.back(), std::move(value)).second)
      fail("duplicate key '" + key.back() + "'");
  }

  Value parse_value() {
    skip_space();
    if (done()) fail("expected a value");
    const char c = peek();
    if (c == '"') return Value(parse_basic_string());
    if (c == '[') return parse_array();
    if (c == '{') return parse_inline_table();
    return parse_scalar();
  }

  std::string parse_basic_string() {
    take();  // opening quote
    std::string s;
    while (true) {
      if (done()) fail("unterminated string");
      char c = take();
      if (c == '"') break;
      if (c == '\n') fail("newline inside string");
      if (c == '\\') {
        if (done()) fail("unterminated escape");
        const char escape = take();
        switch (escape) {
          case '"': s.push_back('"'); break;
          case '\\': s.push_back('\\'); break;
          case 'n': s.push_back('\n'); break;
          case 't': s.push_back('\t'); break;
          case 'r': s.push_back('\r'); break;
          default: fail(std::string("unsupported escape '\\") + escape + "'");
        }
      } else {
        s.push_back(c);
      }
    }
    return s;
  }

  Value parse_array() {
    take();  // '['
    Value::Array items;
    skip_space();
    while (true) {
      if (done()) fail("unterminated array");
      if (peek() == ']') {
        take();
        break;
      }
      items.push_back(parse_value());
      skip_space();
      if (!done() && peek() == ',') {
        take();
        skip_space();
      } else if (done() || peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
    return Value(std::move(items));
  }

  Value parse_inline_table() {
    take();  // '{'
    Value::Table table;
    skip_space();
    while (true) {
      if (done()) fail("unterminated inline table");
      if (peek() == '}') {
        take();
        break;
      }
      auto [key, value] = parse_keyval();
      insert(table, key, std::move(value));
      skip_space();
      if (!done() && peek() == ',') {
        take();
        skip_space();
      } else if (done() || peek() != '}') {
        fail("expected ',' or '}' in inline table");
      }
    }
    return Value(std::move(table));
  }

  Value parse_scalar() {
    std::string token;
    while (!done()) {
      const char c = peek();
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ']' ||
          c == '}' || c == '#')
        break;
      token.push_back(take());
    }
    if (token == "true") return Value(true);
    if (token == "false") return Value(false);
    if (token.empty()) fail("expected a value");

    const bool looks_float = token.find_first_of(".eE") != std::string::npos &&
                             token.find("0x") != 0 && token.find("0X") != 0;
    const char* begin = token.c_str();
    char* end = nullptr;
    if (!looks_float) {
      const long long i = std::strtoll(begin, &end, 10);
      if (end == begin + token.size())
        return Value(static_cast<std::int64_t>(i));
    }
    const double d = std::strtod(begin, &end);
    if (end == begin + token.size()) return Value(d);
    fail("cannot parse value '" + token + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::set<std::string> seen_headers_;
};

}  // namespace

Value::Table parse(const std::string& text) { return Parser(text).parse_document(); }

Value::Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TomlError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

}  // namespace lncl::toml
