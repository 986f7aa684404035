#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "scorelab/functionals.hpp"
#include "scorelab/measures.hpp"
#include "scorelab/scoring.hpp"

namespace scorelab {

using DistributionSampler = std::function<Distribution(std::mt19937_64&)>;

/// Random discrete laws: k atoms with k uniform on {min_atoms..max_atoms},
/// points uniform on [lo, hi], weights from normalized uniforms.
struct AtomGenerator {
  double lo = 0.0;
  double hi = 1.0;
  int min_atoms = 2;
  int max_atoms = 8;

  Distribution operator()(std::mt19937_64& rng) const;
};

/// Short text form of a discrete law for reports.
std::string describe(const Distribution& dist);

struct ConsistencyReport {
  std::size_t trials = 0;
  /// Largest E S(t, Y) - E S(x, Y) over probes; also covers negative scores
  /// and nonzero diagonal values. Positive means a violation.
  double max_violation = 0.0;
  std::string worst_case;
  double tolerance = 1e-9;
  bool pass = false;
};

ConsistencyReport audit_consistency(const ScoringFunction& s, const Functional& t, const DistributionSampler& generator,
                                    std::size_t trials, std::size_t probes, std::uint64_t seed,
                                    double tolerance = 1e-9);

using FunctionalMap = std::function<FunctionalValue(const Distribution&)>;

struct ConvexityReport {
  struct Violation {
    double p;
    double distance;
  };

  std::string functional;
  bool applicable = false;
  double shared_value = 0.0;
  std::vector<double> p_grid;
  std::vector<Violation> violations;
  double max_distance = 0.0;

  bool convex() const { return violations.empty(); }
};

/// Checks that a value shared by T(F0) and T(F1) stays in T((1-p) F0 + p F1).
ConvexityReport level_set_convexity(const Functional& t, const Distribution& f0, const Distribution& f1,
                                    std::span<const double> p_grid, double tolerance = 1e-9);
ConvexityReport level_set_convexity(const std::string& label, const FunctionalMap& t, const Distribution& f0,
                                    const Distribution& f1, std::span<const double> p_grid, double tolerance = 1e-9);

/// Moves f1 so that T(f1) meets T(f0): translation for translation-equivariant
/// functionals, scaling for ratios of power functions on the positive axis.
Distribution align_to_shared_value(const Functional& t, const Distribution& f0, const Distribution& f1);

struct CvarCounterexample {
  Distribution f1;
  Distribution f2;
  double cvar_f1 = 0.0;
  double cvar_f2 = 0.0;
  double cvar_mixture = 0.0;
  double shared_formula = 0.0;   // (b + d) / 2
  double mixture_formula = 0.0;  // (b + c + 2d) / 4
  bool formulas_match = false;
  bool strict = false;
};

/// F1 = alpha d_a + (1-alpha)/2 (d_b + d_d) and F2 = alpha d_c + (1-alpha) d_{(b+d)/2}
/// share CVaR but their even mixture does not. Requires alpha in [1/3, 1)
/// and a < b < c < (b+d)/2; throws ConstraintViolated otherwise.
CvarCounterexample cvar_counterexample(double alpha, double a, double b, double c, double d);

struct OsbandReport {
  std::vector<double> x;
  /// Mean of S_1(x, y) / V(x, y) over the y grid.
  std::vector<double> h;
  /// max_y - min_y of the same ratio.
  std::vector<double> spread;
  double max_spread = 0.0;
};

/// Throws KinkTooClose when a probe lies within 1e-3 of a kink or of the
/// diagonal, and Unsupported when t has no identification function.
OsbandReport osband_ratio_scan(const ScoringFunction& s, const Functional& t, std::span<const double> x_grid,
                               std::span<const double> y_grid);

struct ProprietyReport {
  std::size_t trials = 0;
  /// Largest E_F S(T(F), Y) - E_F S(T(G), Y).
  double max_violation = 0.0;
  std::string worst_case;
  double tolerance = 1e-9;
  bool pass = false;
};

ProprietyReport propriety_audit(const ScoringFunction& s, const Functional& t, const DistributionSampler& generator,
                                std::size_t trials, std::uint64_t seed, double tolerance = 1e-9);

/// q_alpha1(F) + q_alpha2(F) with set midpoints as quantile values.
FunctionalMap sum_of_quantiles(double alpha1, double alpha2);

struct SumOfQuantilesWitness {
  bool found = false;
  std::size_t trials_used = 0;
  Distribution f0 = Distribution::point_mass(0.0);
  Distribution f1 = Distribution::point_mass(0.0);
  ConvexityReport report;
};

/// Randomized search for a pair with a shared sum of quantiles whose mixture
/// leaves the level set.
SumOfQuantilesWitness search_sum_of_quantiles(double alpha1, double alpha2, const AtomGenerator& generator,
                                              std::size_t max_trials, std::uint64_t seed);

}  // namespace scorelab
