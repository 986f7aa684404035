#pragma once

namespace scorelab::numerics {

/// Standard normal quantile; accurate in both tails.
double normal_quantile(double u);

/// Standard normal quantile of 1 - q, computed without forming 1 - q.
double normal_upper_quantile(double q);

double normal_cdf(double x);

/// Quantile of the Student t distribution with nu degrees of freedom
/// (not rescaled).
double student_t_quantile(double nu, double u);

}  // namespace scorelab::numerics
