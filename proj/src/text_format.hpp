#pragma once

// Shortest round-trip text for doubles and strict numeric parsing.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "bbhta/model.hpp"

namespace bbhta::detail {

inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

inline double parse_double(std::string_view text, std::string_view context) {
  text = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string(context) + ": cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

inline std::uint64_t parse_u64(std::string_view text, std::string_view context) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string(context) + ": cannot parse integer '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace bbhta::detail
