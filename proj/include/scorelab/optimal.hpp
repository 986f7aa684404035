#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <string>

#include "scorelab/functionals.hpp"
#include "scorelab/measures.hpp"
#include "scorelab/scoring.hpp"

namespace scorelab {

struct BayesSolution {
  enum class Method { ClosedForm, GridGolden, RootOfIdentification };
  /// MonotoneToLower: the expected score is infinite for every forecast but
  /// decreases towards the lower end, as for APE under a law with an infinite
  /// moment of order -1. The representative is then the lower bound.
  enum class Outcome { Minimum, MonotoneToLower, MonotoneToUpper };

  double representative = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double expected_score = 0.0;
  Method method = Method::GridGolden;
  Outcome outcome = Outcome::Minimum;
};

std::string to_string(BayesSolution::Method method);
std::string to_string(BayesSolution::Outcome outcome);

struct BayesOptions {
  std::size_t coarse_points = 1024;
  double golden_tolerance = 1e-9;
  double flat_threshold = 1e-10;
  /// Cooperative cancellation; the search throws Cancelled once it reads true.
  const std::atomic<bool>* cancel = nullptr;
};

/// argmin_x E_F S(x, Y) by a coarse grid plus kink candidates, golden-section
/// refinement around the best three candidates, and bisection for the edges
/// of a flat minimum. Default bounds span the support and the kinks of its
/// extreme atoms, intersected with the forecast domain.
BayesSolution bayes_rule_numeric(const Distribution& dist, const ScoringFunction& s,
                                 std::optional<Interval> bounds = std::nullopt, const BayesOptions& options = {});

/// Evaluates the functional the score elicits. Throws NoClosedForm without metadata.
BayesSolution bayes_rule_closed(const Distribution& dist, const ScoringFunction& s);

/// Root of x -> E_F V(x, Y) for scores eliciting a functional with an
/// identification function (mean, ratio, expectile). Throws Unsupported otherwise.
BayesSolution bayes_rule_root(const Distribution& dist, const ScoringFunction& s);

Functional weighted_functional(const Functional& t, const WeightFn& w);

/// Median of the law on (0, inf) with density proportional to
/// y^{1/2} (1 + y/(nu - 2))^{-(nu + 1)/2}; nu = inf gives the limit
/// y^{1/2} e^{-y/2}. This is the relative-error Bayes rule for a squared
/// unit-variance t variable.
double relative_error_optimum_t(double nu);

}  // namespace scorelab
