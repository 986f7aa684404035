#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scorelab/functionals.hpp"
#include "scorelab/interval.hpp"
#include "scorelab/named_fn.hpp"

namespace scorelab {

/// Convex function phi with an explicit subgradient. At kinks of a custom
/// grid the right-derivative is used.
class ConvexSpec {
 public:
  enum class Kind { Square, Power, Patton, BoundedRational, NegativeLog, Reciprocal, CustomGrid };

  static ConvexSpec square();
  /// |y|^a, a > 1.
  static ConvexSpec power(double a);
  /// x^b / (b(b-1)), with -log x at b = 0 and x log x at b = 1.
  static ConvexSpec patton(double b);
  /// y^2 / (1 + |y|).
  static ConvexSpec bounded_rational();
  static ConvexSpec negative_log();
  static ConvexSpec reciprocal();
  /// Piecewise linear interpolation of values on a uniform grid over [lo, hi].
  static ConvexSpec custom_grid(double lo, double hi, std::vector<double> values);

  double value(double y) const;
  double derivative(double y) const;
  /// nullopt for the piecewise linear grid.
  std::optional<double> second_derivative(double y) const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  Interval domain() const;
  std::string label() const;
  double grid_lo() const { return grid_lo_; }
  double grid_hi() const { return grid_hi_; }
  const std::vector<double>& grid_values() const { return grid_values_; }

  /// Order b of the Bregman score when it is homogeneous.
  std::optional<double> homogeneity() const;
  bool strictly_convex() const { return kind_ != Kind::CustomGrid; }

  friend bool operator==(const ConvexSpec&, const ConvexSpec&) = default;

 private:
  ConvexSpec(Kind kind, double param) : kind_(kind), param_(param) {}
  void verify() const;

  Kind kind_;
  double param_ = 0.0;
  double grid_lo_ = 0.0;
  double grid_hi_ = 0.0;
  std::vector<double> grid_values_;
};

/// Nondecreasing function g for the piecewise linear family.
class MonotoneSpec {
 public:
  enum class Kind { Identity, Log, Power, Logistic, CustomGrid };

  static MonotoneSpec identity();
  static MonotoneSpec log();
  /// x^b / b on (0, inf), log x at b = 0.
  static MonotoneSpec power(double b);
  static MonotoneSpec logistic();
  static MonotoneSpec custom_grid(double lo, double hi, std::vector<double> values);

  double value(double x) const;
  double derivative(double x) const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  Interval domain() const;
  std::string label() const;
  double grid_lo() const { return grid_lo_; }
  double grid_hi() const { return grid_hi_; }
  const std::vector<double>& grid_values() const { return grid_values_; }
  std::optional<double> homogeneity() const;

  friend bool operator==(const MonotoneSpec&, const MonotoneSpec&) = default;

 private:
  MonotoneSpec(Kind kind, double param) : kind_(kind), param_(param) {}
  void verify() const;

  Kind kind_;
  double param_ = 0.0;
  double grid_lo_ = 0.0;
  double grid_hi_ = 0.0;
  std::vector<double> grid_values_;
};

class ScoringFunction;
using ScorePtr = std::shared_ptr<const ScoringFunction>;

/// A negatively oriented scoring function S(x, y) for a point forecast x and
/// realization y, together with its forecast and observation domains and the
/// functional it elicits. Values are immutable.
class ScoringFunction {
 public:
  struct SE {};
  struct AE {};
  struct APE {};
  struct RE {};
  struct BetaMedianScore { double beta; };
  struct Bregman { ConvexSpec phi; };
  struct PowerBregman { double a; };
  struct Patton { double b; };
  struct Pinball { double alpha; };
  struct GPL { double alpha; MonotoneSpec g; };
  struct GPLPower { double alpha; double b; };
  struct AsymQuadratic { double tau; };
  struct ExpectileBregman { double tau; ConvexSpec phi; };
  struct RatioBregman { ConvexSpec phi; NamedFn r; NamedFn s; };
  struct SquaredRelativeError {};
  struct ObsWeightedSE {};
  struct ZeroOne { double c; };
  struct Survival { double k; };
  struct Weighted { ScorePtr base; WeightFn w; };
  struct Revealed { ScorePtr base; Bijection g; };
  struct Component { ScorePtr score; double weight; };
  struct Mixture { std::vector<Component> components; };
  struct Custom { std::string label; std::function<double(double, double)> fn; };

  using Variant = std::variant<SE, AE, APE, RE, BetaMedianScore, Bregman, PowerBregman, Patton, Pinball, GPL,
                               GPLPower, AsymQuadratic, ExpectileBregman, RatioBregman, SquaredRelativeError,
                               ObsWeightedSE, ZeroOne, Survival, Weighted, Revealed, Mixture, Custom>;

  static ScoringFunction se();
  static ScoringFunction ae();
  static ScoringFunction ape();
  static ScoringFunction re();
  /// |1 - (y/x)^beta|, beta != 0.
  static ScoringFunction beta_median(double beta);
  static ScoringFunction bregman(ConvexSpec phi);
  static ScoringFunction power_bregman(double a);
  static ScoringFunction patton(double b);
  static ScoringFunction pinball(double alpha);
  static ScoringFunction gpl(double alpha, MonotoneSpec g);
  /// (1(x >= y) - alpha)(x^b - y^b)/b, log(x/y) at b = 0.
  static ScoringFunction gpl_power(double alpha, double b);
  static ScoringFunction asym_quadratic(double tau);
  static ScoringFunction expectile_bregman(double tau, ConvexSpec phi);
  /// `observations` narrows the observation domain, e.g. to (0, inf) where s > 0.
  static ScoringFunction ratio_bregman(ConvexSpec phi, NamedFn r, NamedFn s,
                                       std::optional<Interval> observations = std::nullopt);
  static ScoringFunction squared_relative_error();
  static ScoringFunction obs_weighted_se();
  static ScoringFunction zero_one(double c);
  static ScoringFunction survival(double k);
  /// A user score without elicited-functional metadata.
  static ScoringFunction custom(std::string label, std::function<double(double, double)> fn,
                                Interval forecast_domain, Interval observation_domain);

  /// S(x, y). Throws DomainError outside the domains.
  double operator()(double x, double y) const;

  const Variant& variant() const { return value_; }
  /// Serialization tag, e.g. "se", "pinball", "weighted".
  std::string family() const;
  std::string label() const;
  const Interval& forecast_domain() const { return forecast_domain_; }
  const Interval& observation_domain() const { return observation_domain_; }
  /// The functional this score is consistent for; nullopt for custom scores.
  const std::optional<Functional>& elicits() const { return elicits_; }

  /// Forecast values at which x -> S(x, y) is not smooth.
  std::vector<double> kinks(double y) const;

  /// beta when the expected score needs E[Y^beta] (APE, RE, beta-median).
  std::optional<double> observation_power() const;

  bool serializable() const;

 private:
  ScoringFunction(Variant v, Interval forecast_domain, Interval observation_domain, std::optional<Functional> t);
  void verify_diagonal() const;
  friend ScoringFunction weighted_score(const ScoringFunction&, const WeightFn&);
  friend ScoringFunction revelation_transform(const ScoringFunction&, const Bijection&);
  friend ScoringFunction mixture_score(const std::vector<std::pair<ScoringFunction, double>>&);

  Variant value_;
  Interval forecast_domain_;
  Interval observation_domain_;
  std::optional<Functional> elicits_;
};

/// w(y) S(x, y); elicits the functional applied to the reweighted measure.
ScoringFunction weighted_score(const ScoringFunction& s, const WeightFn& w);

/// S(g^{-1}(x), y); elicits g applied to the base functional.
/// Throws InverseMismatch when the supplied inverse is wrong on probes.
ScoringFunction revelation_transform(const ScoringFunction& s, const Bijection& g);

/// Finite positive combination. Throws MixedFunctionals when the components
/// elicit different functionals.
ScoringFunction mixture_score(const std::vector<std::pair<ScoringFunction, double>>& components);

/// S(T(F), y) with the representative value of T(F).
double induced_proper_score(const ScoringFunction& s, const Functional& t, const Distribution& f, double y);

/// b such that S(cx, cy) = |c|^b S(x, y), verified on probes.
std::optional<double> homogeneity_order(const ScoringFunction& s);

/// Probe points spread over an interval: geometric on the positive half-axis,
/// linear otherwise.
std::vector<double> probe_points(const Interval& domain, std::size_t count);

/// Expected score E_F[S(x, Y)].
double expected_score(const ScoringFunction& s, double x, const Distribution& dist);

}  // namespace scorelab
