#include "heatcontent/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace heatcontent {

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string significant12(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return {buf.data(), static_cast<std::size_t>(n)};
}

}  // namespace heatcontent
