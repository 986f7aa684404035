#include "scorelab/interval.hpp"

#include <cmath>
#include <sstream>

namespace scorelab {

bool Interval::contains(double x) const {
  if (std::isnan(x)) return false;
  const bool above = lo_open ? x > lo : x >= lo;
  const bool below = hi_open ? x < hi : x <= hi;
  return above && below;
}

bool Interval::is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }

Interval Interval::intersect(const Interval& other) const {
  Interval out;
  if (lo > other.lo) {
    out.lo = lo;
    out.lo_open = lo_open;
  } else if (other.lo > lo) {
    out.lo = other.lo;
    out.lo_open = other.lo_open;
  } else {
    out.lo = lo;
    out.lo_open = lo_open || other.lo_open;
  }
  if (hi < other.hi) {
    out.hi = hi;
    out.hi_open = hi_open;
  } else if (other.hi < hi) {
    out.hi = other.hi;
    out.hi_open = other.hi_open;
  } else {
    out.hi = hi;
    out.hi_open = hi_open || other.hi_open;
  }
  return out;
}

std::string Interval::to_string() const {
  std::ostringstream os;
  os << (lo_open ? '(' : '[') << lo << ", " << hi << (hi_open ? ')' : ']');
  return os.str();
}

}  // namespace scorelab
