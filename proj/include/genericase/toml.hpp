#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "genericase/common.hpp"

namespace genericase {

/// Scalar or flat array value from a config file.
struct TomlValue {
  enum class Kind { String, Integer, Float, Boolean, Array };
  Kind kind = Kind::String;
  std::string str;
  std::int64_t integer = 0;
  double real = 0.0;
  bool boolean = false;
  std::vector<TomlValue> array;

  double as_double() const {
    if (kind == Kind::Float) return real;
    if (kind == Kind::Integer) return static_cast<double>(integer);
    throw ConfigError("expected a number, got '" + str + "'");
  }
};

/// Keys are flattened as "section.key"; top-level keys keep their bare name.
using TomlTable = std::map<std::string, TomlValue>;

namespace toml_detail {

[[noreturn]] inline void fail(const std::string& origin, std::size_t line,
                              const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Cuts a trailing comment, honoring quoted strings.
inline std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

inline bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
      return false;
  return true;
}

inline TomlValue parse_scalar(std::string_view raw, const std::string& origin,
                              std::size_t line) {
  TomlValue v;
  if (raw.empty()) fail(origin, line, "empty value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      fail(origin, line, "unterminated string");
    v.kind = TomlValue::Kind::String;
    std::string_view body = raw.substr(1, raw.size() - 2);
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '\\') {
        if (i + 1 >= body.size()) fail(origin, line, "dangling escape in string");
        char e = body[++i];
        switch (e) {
          case '"': v.str += '"'; break;
          case '\\': v.str += '\\'; break;
          case 'n': v.str += '\n'; break;
          case 't': v.str += '\t'; break;
          default: fail(origin, line, std::string("unsupported escape \\") + e);
        }
      } else if (body[i] == '"') {
        fail(origin, line, "unescaped quote inside string");
      } else {
        v.str += body[i];
      }
    }
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.kind = TomlValue::Kind::Boolean;
    v.boolean = raw == "true";
    return v;
  }
  const std::string text(raw);
  const bool looks_float = text.find_first_of(".eE") != std::string::npos &&
                           text.find("0x") == std::string::npos;
  std::size_t used = 0;
  try {
    if (looks_float) {
      v.kind = TomlValue::Kind::Float;
      v.real = std::stod(text, &used);
    } else {
      v.kind = TomlValue::Kind::Integer;
      v.integer = std::stoll(text, &used, 10);
    }
  } catch (const std::exception&) {
    fail(origin, line, "cannot parse value '" + text + "'");
  }
  if (used != text.size()) fail(origin, line, "trailing characters in value '" + text + "'");
  return v;
}

inline TomlValue parse_value(std::string_view raw, const std::string& origin,
                             std::size_t line) {
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') fail(origin, line, "array must close on the same line");
    TomlValue arr;
    arr.kind = TomlValue::Kind::Array;
    std::string_view body = trim(raw.substr(1, raw.size() - 2));
    while (!body.empty()) {
      bool in_string = false;
      std::size_t cut = body.size();
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '"' && (i == 0 || body[i - 1] != '\\')) in_string = !in_string;
        if (body[i] == ',' && !in_string) {
          cut = i;
          break;
        }
      }
      std::string_view item = trim(body.substr(0, cut));
      if (item.empty()) fail(origin, line, "empty array entry");
      arr.array.push_back(parse_scalar(item, origin, line));
      body = cut == body.size() ? std::string_view{} : trim(body.substr(cut + 1));
    }
    return arr;
  }
  return parse_scalar(raw, origin, line);
}

}  // namespace toml_detail

/// Parses the TOML subset used by experiment configs: [section] headers,
/// key = scalar, and single-line arrays of scalars. `origin` names the file
/// in error messages; every error is line-anchored.
inline TomlTable parse_toml(const std::string& text, const std::string& origin) {
  using namespace toml_detail;
  TomlTable table;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    std::string_view line = trim(strip_comment(
        std::string_view(text).substr(pos, end - pos)));
    pos = end + 1;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section header");
      std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name)) fail(origin, line_no, "invalid section name");
      section = std::string(name);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(origin, line_no, "expected 'key = value'");
    std::string_view key = trim(line.substr(0, eq));
    std::string_view raw = trim(line.substr(eq + 1));
    if (!valid_key(key)) fail(origin, line_no, "invalid key '" + std::string(key) + "'");
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (table.count(full)) fail(origin, line_no, "duplicate key '" + full + "'");
    table.emplace(std::move(full), parse_value(raw, origin, line_no));
    if (end == text.size()) break;
  }
  return table;
}

}  // namespace genericase
