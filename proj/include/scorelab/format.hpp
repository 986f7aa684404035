#pragma once

#include <string>

namespace scorelab {

/// Ten significant digits, dot decimal separator regardless of locale.
std::string format_number(double x);

/// Shortest representation that parses back to the same double.
std::string format_exact(double x);

/// Locale-independent parse; throws ParseError on trailing garbage.
double parse_number(const std::string& text);

}  // namespace scorelab
