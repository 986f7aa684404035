#pragma once

#include <limits>
#include <string>

namespace scorelab {

/// A real interval with independently open or closed ends. Infinite ends are
/// always treated as open.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;

  static Interval real_line() { return {}; }
  static Interval positive() { return {0.0, std::numeric_limits<double>::infinity(), true, true}; }
  static Interval closed(double lo, double hi) { return {lo, hi, false, false}; }

  bool contains(double x) const;
  bool is_finite() const;
  double width() const { return hi - lo; }
  Interval intersect(const Interval& other) const;
  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace scorelab
