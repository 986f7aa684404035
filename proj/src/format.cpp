#include "scorelab/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "scorelab/error.hpp"

namespace scorelab {

namespace {

std::string special_value(double x) {
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return special_value(x);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
  if (ec != std::errc()) fail(ErrorCode::InvalidArgument, "number formatting failed");
  return std::string(buf, end);
}

std::string format_exact(double x) {
  if (!std::isfinite(x)) return special_value(x);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) fail(ErrorCode::InvalidArgument, "number formatting failed");
  return std::string(buf, end);
}

double parse_number(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return INFINITY;
  if (text == "-inf" || text == "-infinity") return -INFINITY;
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) fail(ErrorCode::ParseError, "not a number: '" + text + "'");
  return value;
}

}  // namespace scorelab
