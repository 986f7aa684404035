#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "scorelab/measures.hpp"
#include "scorelab/named_fn.hpp"

namespace scorelab {

/// Value of a possibly set-valued functional. For interval-valued results the
/// representative is the midpoint of [set_lo, set_hi]. When the solution set
/// is a finite union of intervals (modal midpoints under ties), `components`
/// lists them and set_lo/set_hi span their midpoints.
struct FunctionalValue {
  double representative = 0.0;
  double set_lo = 0.0;
  double set_hi = 0.0;
  std::vector<Interval> components;

  static FunctionalValue point(double x) { return {x, x, x, {}}; }
  static FunctionalValue interval(double lo, double hi) { return {0.5 * (lo + hi), lo, hi, {}}; }

  bool is_set() const { return set_hi > set_lo; }
  bool contains(double x, double tol) const { return x >= set_lo - tol && x <= set_hi + tol; }
};

class Functional {
 public:
  struct Mean {
    friend bool operator==(const Mean&, const Mean&) = default;
  };
  struct Quantile {
    double alpha;
    friend bool operator==(const Quantile&, const Quantile&) = default;
  };
  struct Expectile {
    double tau;
    friend bool operator==(const Expectile&, const Expectile&) = default;
  };
  /// beta == 0 is the plain median.
  struct BetaMedian {
    double beta;
    friend bool operator==(const BetaMedian&, const BetaMedian&) = default;
  };
  struct Ratio {
    NamedFn r;
    NamedFn s;
    friend bool operator==(const Ratio&, const Ratio&) = default;
  };
  struct CVaR {
    double alpha;
    friend bool operator==(const CVaR&, const CVaR&) = default;
  };
  struct ModalMidpoint {
    double c;
    friend bool operator==(const ModalMidpoint&, const ModalMidpoint&) = default;
  };
  /// inner applied to the reweighted measure F^(w).
  struct Weighted {
    std::shared_ptr<const Functional> inner;
    WeightFn w;
  };
  /// g applied to the value of inner.
  struct Transformed {
    std::shared_ptr<const Functional> inner;
    Bijection g;
  };
  /// h^{-1}(inner(h F)): inner evaluated on the push-forward under h, mapped back.
  struct Conjugated {
    std::shared_ptr<const Functional> inner;
    Bijection h;
  };

  using Variant = std::variant<Mean, Quantile, Expectile, BetaMedian, Ratio, CVaR, ModalMidpoint, Weighted,
                               Transformed, Conjugated>;

  static Functional mean() { return Functional(Mean{}); }
  static Functional quantile(double alpha);
  static Functional median() { return quantile(0.5); }
  static Functional expectile(double tau);
  static Functional beta_median(double beta);
  static Functional ratio(NamedFn r, NamedFn s);
  static Functional cvar(double alpha);
  static Functional modal_midpoint(double c);
  static Functional weighted(const Functional& inner, WeightFn w);
  static Functional transformed(const Functional& inner, Bijection g);
  static Functional conjugated(const Functional& inner, Bijection h);

  const Variant& variant() const { return value_; }
  std::string label() const;

  friend bool operator==(const Functional& a, const Functional& b);

 private:
  explicit Functional(Variant v) : value_(std::move(v)) {}
  Variant value_;
};

namespace functionals {

FunctionalValue evaluate(const Functional& t, const Distribution& dist);

FunctionalValue mean(const Distribution& dist);
/// The alpha-quantile set with its midpoint as representative.
FunctionalValue quantile(const Distribution& dist, double alpha);
FunctionalValue expectile(const Distribution& dist, double tau);
FunctionalValue beta_median(const Distribution& dist, double beta);
FunctionalValue ratio_expectations(const Distribution& dist, const NamedFn& r, const NamedFn& s);
FunctionalValue cvar(const Distribution& dist, double alpha);
FunctionalValue modal_midpoint(const Distribution& dist, double c);

/// E_F[V(x, Y)] for the identification function of the mean, a ratio of
/// expectations, a quantile or an expectile. Throws Unsupported otherwise.
double identification_residual(const Functional& t, double x, const Distribution& dist);

/// V(x, y) itself, for the same four functionals.
double identification_function(const Functional& t, double x, double y);

}  // namespace functionals
}  // namespace scorelab
