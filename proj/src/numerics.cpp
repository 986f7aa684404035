#include "scorelab/numerics.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

namespace scorelab::numerics {

double normal_quantile(double u) {
  static const boost::math::normal_distribution<double> standard;
  if (u > 0.5) return boost::math::quantile(boost::math::complement(standard, 1.0 - u));
  return boost::math::quantile(standard, u);
}

double normal_upper_quantile(double q) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(boost::math::complement(standard, q));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double student_t_quantile(double nu, double u) {
  const boost::math::students_t_distribution<double> t(nu);
  return boost::math::quantile(t, u);
}

}  // namespace scorelab::numerics
