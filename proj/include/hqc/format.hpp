#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "hqc/error.hpp"

namespace hqc {

/// Shortest representation that round-trips (at most 17 significant digits).
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::string_view what) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '+')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    fail(ErrorKind::invalid_input, std::string(what) + ": cannot parse `" + std::string(text) + "` as a number");
  return value;
}

}  // namespace hqc
