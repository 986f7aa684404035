#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "scorelab/interval.hpp"
#include "scorelab/named_fn.hpp"

namespace scorelab {

struct Atom {
  double point;
  double weight;
};

enum class ParametricFamily { StandardNormal, StudentT, ScaledChiSq1 };

/// StudentT is rescaled to unit variance. ScaledChiSq1 is the law of
/// scale * Z^2 with Z standard normal.
struct ParametricSpec {
  ParametricFamily family = ParametricFamily::StandardNormal;
  double nu = 0.0;
  double scale = 1.0;

  friend bool operator==(const ParametricSpec&, const ParametricSpec&) = default;
};

/// A probability measure on the real line, held internally as sorted atoms
/// with positive weights summing to one. Grid densities become trapezoid
/// atoms on their nodes; parametric laws are materialized as conditional
/// means of equal-probability cells of the quantile function.
///
/// Values are immutable once constructed.
class Distribution {
 public:
  enum class Kind { Atoms, Sample, Grid, Parametric };

  static constexpr std::size_t kDefaultResolution = 20001;
  static constexpr double kTailMass = 1e-10;
  static constexpr double kMergeDistance = 1e-12;

  static Distribution atoms(std::span<const Atom> atoms);
  static Distribution atoms(std::span<const double> points, std::span<const double> weights);
  static Distribution point_mass(double point);
  static Distribution sample(std::span<const double> draws);
  static Distribution grid(double lo, double hi, std::span<const double> density);
  static Distribution parametric(const ParametricSpec& spec, std::size_t resolution = kDefaultResolution);
  static Distribution standard_normal(std::size_t resolution = kDefaultResolution);
  static Distribution student_t(double nu, std::size_t resolution = kDefaultResolution);
  static Distribution scaled_chisq1(double scale, std::size_t resolution = kDefaultResolution);

  /// (1 - p) * first + p * second.
  static Distribution mixture(const Distribution& first, const Distribution& second, double p);

  Kind kind() const { return kind_; }
  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  /// cumulative()[i] = F(points()[i]).
  std::span<const double> cumulative() const { return cumulative_; }
  double min_point() const { return points_.front(); }
  double max_point() const { return points_.back(); }
  Interval support_hull() const { return Interval::closed(min_point(), max_point()); }

  const std::optional<ParametricSpec>& parametric_spec() const { return parametric_; }
  /// Truncation bounds of a materialized parametric law.
  std::optional<Interval> truncation() const { return truncation_; }

  /// Grid description, kept for serialization.
  double grid_lo() const { return grid_lo_; }
  double grid_hi() const { return grid_hi_; }
  std::span<const double> grid_density() const { return grid_density_; }
  /// Sample draws as given, kept for serialization.
  std::span<const double> sample_draws() const { return draws_; }

  /// Exact mean of a parametric law; nullopt for finite representations.
  std::optional<double> analytic_mean() const;

  /// Whether E|Y|^p is finite. Exact for parametric laws; for finite
  /// representations it is finite unless an atom sits at zero with p < 0.
  bool power_moment_finite(double p) const;

  /// Push-forward under g applied atomwise; the result is an atom measure.
  Distribution transformed(const std::function<double(double)>& g) const;
  Distribution scaled(double c) const;

 private:
  Distribution() = default;
  static Distribution from_atoms(std::vector<double> points, std::vector<double> weights, Kind kind);

  Kind kind_ = Kind::Atoms;
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::optional<ParametricSpec> parametric_;
  std::optional<Interval> truncation_;
  double grid_lo_ = 0.0;
  double grid_hi_ = 0.0;
  std::vector<double> grid_density_;
  std::vector<double> draws_;
};

namespace measures {

/// E_F[f(Y)]. Throws NonFinite if f is not finite at an atom.
double expectation(const Distribution& dist, const std::function<double(double)>& f);

/// Right-continuous F(x).
double cdf(const Distribution& dist, double x);

/// lim_{y -> x-} F(y).
double cdf_left(const Distribution& dist, double x);

/// Lower endpoint of the beta-quantile set (generalized inverse).
double quantile(const Distribution& dist, double beta);

/// Full closed interval of beta-quantiles; nondegenerate when F is flat at beta.
Interval quantile_set(const Distribution& dist, double beta);

/// F^(w): the measure with density proportional to w(y) f(y).
/// Throws DegenerateWeight when E_F[w(Y)] is zero or not finite.
Distribution reweight(const Distribution& dist, const WeightFn& w);

}  // namespace measures
}  // namespace scorelab
