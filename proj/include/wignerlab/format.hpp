#ifndef WIGNERLAB_FORMAT_HPP
#define WIGNERLAB_FORMAT_HPP

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace wignerlab {

// Shortest round-trip decimal form. Used everywhere a double is written
// (config echo, CSV, SVG) so identical values always print identically.
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a real number: '" + std::string(s) + "'");
  return x;
}

inline long long parse_int(std::string_view s) {
  long long x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return x;
}

inline std::uint64_t parse_uint64(std::string_view s) {
  std::uint64_t x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a seed value: '" + std::string(s) + "'");
  return x;
}

}  // namespace wignerlab

#endif
