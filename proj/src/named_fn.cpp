#include "scorelab/named_fn.hpp"

#include <cmath>
#include <limits>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"

namespace scorelab {

NamedFn::NamedFn(Kind kind, double param, std::string label, std::function<double(double)> fn)
    : kind_(kind), param_(param), label_(std::move(label)), custom_(std::move(fn)) {}

NamedFn NamedFn::identity() { return {Kind::Identity, 0.0, "identity"}; }
NamedFn NamedFn::square() { return {Kind::Square, 0.0, "square"}; }
NamedFn NamedFn::reciprocal() { return {Kind::Reciprocal, 0.0, "reciprocal"}; }
NamedFn NamedFn::reciprocal_square() { return {Kind::ReciprocalSquare, 0.0, "reciprocal-square"}; }
NamedFn NamedFn::constant(double c) { return {Kind::Constant, c, "constant(" + format_number(c) + ")"}; }
NamedFn NamedFn::power(double p) { return {Kind::Power, p, "power(" + format_number(p) + ")"}; }
NamedFn NamedFn::log() { return {Kind::Log, 0.0, "log"}; }
NamedFn NamedFn::exp() { return {Kind::Exp, 0.0, "exp"}; }
NamedFn NamedFn::scale(double c) {
  require(c != 0.0 && std::isfinite(c), ErrorCode::InvalidArgument, "scale factor must be finite and nonzero");
  return {Kind::Scale, c, "scale(" + format_number(c) + ")"};
}
NamedFn NamedFn::custom(std::string label, std::function<double(double)> fn) {
  require(static_cast<bool>(fn), ErrorCode::InvalidArgument, "custom function is empty");
  return {Kind::Custom, 0.0, std::move(label), std::move(fn)};
}

double NamedFn::operator()(double y) const {
  switch (kind_) {
    case Kind::Identity: return y;
    case Kind::Square: return y * y;
    case Kind::Reciprocal: return 1.0 / y;
    case Kind::ReciprocalSquare: return 1.0 / (y * y);
    case Kind::Constant: return param_;
    case Kind::Power: return std::pow(y, param_);
    case Kind::Log: return std::log(y);
    case Kind::Exp: return std::exp(y);
    case Kind::Scale: return param_ * y;
    case Kind::Custom: return custom_(y);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Interval NamedFn::domain() const {
  switch (kind_) {
    case Kind::Reciprocal:
    case Kind::ReciprocalSquare:
    case Kind::Log:
      return Interval::positive();
    case Kind::Power:
      return (param_ >= 0.0 && std::floor(param_) == param_) ? Interval::real_line() : Interval::positive();
    default:
      return Interval::real_line();
  }
}

std::optional<double> NamedFn::power_degree() const {
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Square: return 2.0;
    case Kind::Reciprocal: return -1.0;
    case Kind::ReciprocalSquare: return -2.0;
    case Kind::Constant: return 0.0;
    case Kind::Power: return param_;
    case Kind::Scale: return 1.0;
    default: return std::nullopt;
  }
}

WeightFn WeightFn::power(double p) {
  if (p == 0.0) return unit();
  if (p == 1.0) return WeightFn(NamedFn::identity());
  if (p == -1.0) return WeightFn(NamedFn::reciprocal());
  if (p == -2.0) return WeightFn(NamedFn::reciprocal_square());
  if (p == 2.0) return WeightFn(NamedFn::square());
  return WeightFn(NamedFn::power(p));
}

double WeightFn::operator()(double y) const {
  const double w = fn_(y);
  if (w < 0.0) fail(ErrorCode::DomainError, "weight " + label() + " is negative at y=" + format_number(y));
  return w;
}

std::optional<double> WeightFn::power_exponent() const {
  if (fn_.kind() == NamedFn::Kind::Scale) return std::nullopt;
  if (fn_.kind() == NamedFn::Kind::Constant && fn_.param() <= 0.0) return std::nullopt;
  return fn_.power_degree();
}

Bijection Bijection::identity() { return {NamedFn::identity(), NamedFn::identity()}; }
Bijection Bijection::scale(double c) { return {NamedFn::scale(c), NamedFn::scale(1.0 / c)}; }
Bijection Bijection::log() { return {NamedFn::log(), NamedFn::exp()}; }
Bijection Bijection::exp() { return {NamedFn::exp(), NamedFn::log()}; }

Interval Bijection::image(const Interval& in) const {
  const double a = forward_(in.lo);
  const double b = forward_(in.hi);
  if (a <= b) return {a, b, in.lo_open || !std::isfinite(a), in.hi_open || !std::isfinite(b)};
  return {b, a, in.hi_open || !std::isfinite(b), in.lo_open || !std::isfinite(a)};
}

}  // namespace scorelab
