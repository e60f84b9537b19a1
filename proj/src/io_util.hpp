#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rydvmc::io {

// Shortest round-trip decimal form, so re-emitting a parsed file is
// byte-identical.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("could not parse " + what + " from '" + std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view text, const std::string& what) {
  Int v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("could not parse " + what + " from '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace rydvmc::io
