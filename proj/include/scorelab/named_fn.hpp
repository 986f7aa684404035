#pragma once

#include <functional>
#include <optional>
#include <string>

#include "scorelab/interval.hpp"

namespace scorelab {

/// A real function drawn from a small named basis, so that it can be
/// serialized and compared. Custom functions are allowed but not serializable.
class NamedFn {
 public:
  enum class Kind { Identity, Square, Reciprocal, ReciprocalSquare, Constant, Power, Log, Exp, Scale, Custom };

  static NamedFn identity();
  static NamedFn square();
  static NamedFn reciprocal();
  static NamedFn reciprocal_square();
  static NamedFn constant(double c = 1.0);
  static NamedFn power(double p);
  static NamedFn log();
  static NamedFn exp();
  static NamedFn scale(double c);
  static NamedFn custom(std::string label, std::function<double(double)> fn);

  double operator()(double y) const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  const std::string& label() const { return label_; }
  bool serializable() const { return kind_ != Kind::Custom; }

  /// Natural domain: the positive half-axis for reciprocals, logs and
  /// non-integer powers, otherwise the real line.
  Interval domain() const;

  /// d such that f(c y) = c^d f(y) for c > 0, when the basis element is a power.
  std::optional<double> power_degree() const;

  friend bool operator==(const NamedFn& a, const NamedFn& b) {
    return a.kind_ == b.kind_ && a.param_ == b.param_ && a.label_ == b.label_;
  }

 private:
  NamedFn(Kind kind, double param, std::string label, std::function<double(double)> fn = {});

  Kind kind_;
  double param_;
  std::string label_;
  std::function<double(double)> custom_;
};

/// Nonnegative weight function w(y) used to reweight measures and scores.
class WeightFn {
 public:
  explicit WeightFn(NamedFn fn) : fn_(std::move(fn)) {}

  static WeightFn unit() { return WeightFn(NamedFn::constant(1.0)); }
  static WeightFn power(double p);

  /// Throws DomainError on a negative value.
  double operator()(double y) const;

  const NamedFn& fn() const { return fn_; }
  std::string label() const { return fn_.label(); }
  std::optional<double> power_exponent() const;

  friend bool operator==(const WeightFn&, const WeightFn&) = default;

 private:
  NamedFn fn_;
};

/// One-to-one map g together with its inverse.
class Bijection {
 public:
  Bijection(NamedFn forward, NamedFn inverse) : forward_(std::move(forward)), inverse_(std::move(inverse)) {}

  static Bijection identity();
  static Bijection scale(double c);
  static Bijection log();
  static Bijection exp();

  double operator()(double x) const { return forward_(x); }
  double inverse(double x) const { return inverse_(x); }
  const NamedFn& forward_fn() const { return forward_; }
  const NamedFn& inverse_fn() const { return inverse_; }
  std::string label() const { return forward_.label(); }

  /// Image of an interval under the (monotone) map.
  Interval image(const Interval& in) const;

  friend bool operator==(const Bijection&, const Bijection&) = default;

 private:
  NamedFn forward_;
  NamedFn inverse_;
};

}  // namespace scorelab
