#pragma once

// Numeric forecast extraction from free-text agent turns.

#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "debate/text.hpp"

namespace debate {

namespace detail {

struct NumberMatch {
  double value = 0;
  std::size_t end = 0;  // one past the last digit
  bool has_sign = false;
};

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

/// Next decimal number at or after `from`, with an immediately preceding sign
/// (+, -, or U+2212) folded in.
inline std::optional<NumberMatch> next_number(std::string_view s, std::size_t from) {
  for (std::size_t i = from; i < s.size(); ++i) {
    const bool starts = is_digit(s[i]) || (s[i] == '.' && i + 1 < s.size() && is_digit(s[i + 1]));
    if (!starts) continue;
    // Skip continuations of a preceding number, e.g. the "5" in "2.5" when resuming.
    std::size_t j = i;
    while (j < s.size() && is_digit(s[j])) ++j;
    if (j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1])) {
      ++j;
      while (j < s.size() && is_digit(s[j])) ++j;
    } else if (s[i] == '.') {
      ++j;
      while (j < s.size() && is_digit(s[j])) ++j;
    }
    NumberMatch m;
    m.end = j;
    m.value = std::strtod(std::string(s.substr(i, j - i)).c_str(), nullptr);
    if (i >= 1 && (s[i - 1] == '+' || s[i - 1] == '-')) {
      m.has_sign = true;
      if (s[i - 1] == '-') m.value = -m.value;
    } else if (i >= 3 && s.substr(i - 3, 3) == "\xE2\x88\x92") {
      m.has_sign = true;
      m.value = -m.value;
    }
    return m;
  }
  return std::nullopt;
}

}  // namespace detail

/// Forecast in percent. A line containing "Impact:" wins: the first number
/// after the marker (sign and % optional). Otherwise the first explicitly
/// signed percentage ("+0.3%", "-1.5 %"). Otherwise missing.
inline std::optional<double> extract_forecast(std::string_view text) {
  const std::string lower = to_lower(text);
  static constexpr std::string_view kMarker = "impact:";
  for (auto pos = lower.find(kMarker); pos != std::string::npos; pos = lower.find(kMarker, pos + 1)) {
    const auto line_end = text.find('\n', pos);
    const auto line = text.substr(0, line_end == std::string_view::npos ? text.size() : line_end);
    if (auto m = detail::next_number(line, pos + kMarker.size())) return m->value;
  }
  for (std::size_t from = 0;;) {
    auto m = detail::next_number(text, from);
    if (!m) return std::nullopt;
    std::size_t k = m->end;
    while (k < text.size() && text[k] == ' ') ++k;
    if (m->has_sign && k < text.size() && text[k] == '%') return m->value;
    from = m->end;
  }
}

}  // namespace debate
