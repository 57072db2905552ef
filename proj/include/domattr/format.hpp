#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <system_error>

#include "domattr/error.hpp"

namespace domattr {

/// Shortest decimal text that round-trips to the same double. "inf", "-inf"
/// and "nan" for the non-finite values.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  if (text == "inf") return HUGE_VAL;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    fail(ErrorCategory::invalid_argument, "not a number: '" + std::string(text) + "'");
  return v;
}

/// A term of the form `name{key=value,key=value}` (braces optional when
/// there are no parameters).
struct SpecTerm {
  std::string name;
  std::map<std::string, std::string, std::less<>> params;

  double number(std::string_view key) const {
    const auto it = params.find(key);
    if (it == params.end())
      fail(ErrorCategory::invalid_argument, name + ": missing parameter '" + std::string(key) + "'");
    return parse_double(it->second);
  }

  double number_or(std::string_view key, double fallback) const {
    return params.contains(key) ? number(key) : fallback;
  }

  std::string text_or(std::string_view key, std::string fallback) const {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline SpecTerm parse_spec_term(std::string_view text) {
  text = detail::trim(text);
  SpecTerm term;
  const auto open = text.find('{');
  if (open == std::string_view::npos) {
    term.name = std::string(text);
  } else {
    if (text.back() != '}')
      fail(ErrorCategory::invalid_argument, "unterminated '{' in '" + std::string(text) + "'");
    term.name = std::string(detail::trim(text.substr(0, open)));
    std::string_view body = text.substr(open + 1, text.size() - open - 2);
    while (!detail::trim(body).empty()) {
      const auto comma = body.find(',');
      const std::string_view item = detail::trim(body.substr(0, comma));
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        fail(ErrorCategory::invalid_argument, "expected key=value, got '" + std::string(item) + "'");
      term.params.emplace(std::string(detail::trim(item.substr(0, eq))),
                          std::string(detail::trim(item.substr(eq + 1))));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
  }
  if (term.name.empty()) fail(ErrorCategory::invalid_argument, "empty spec name");
  return term;
}

}  // namespace domattr
