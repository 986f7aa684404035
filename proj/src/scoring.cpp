#include "scorelab/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"

namespace scorelab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kShapeTolerance = 1e-10;
constexpr double kDiagonalTolerance = 1e-12;

void check_level(double level, const char* name) {
  require(level > 0.0 && level < 1.0, ErrorCode::InvalidArgument, std::string(name) + " must lie in (0, 1)");
}

void check_finite(double v, const char* name) {
  require(std::isfinite(v), ErrorCode::InvalidArgument, std::string(name) + " must be finite");
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

struct GridLookup {
  double lo;
  double hi;
  const std::vector<double>& values;

  double step() const { return (hi - lo) / static_cast<double>(values.size() - 1); }

  std::size_t cell(double y) const {
    const double pos = (y - lo) / step();
    const auto last = values.size() - 2;
    if (!(pos > 0.0)) return 0;
    return std::min(static_cast<std::size_t>(pos), last);
  }
  double value(double y) const {
    const std::size_t i = cell(y);
    const double x0 = lo + static_cast<double>(i) * step();
    return values[i] + (values[i + 1] - values[i]) * (y - x0) / step();
  }
  double slope(double y) const {
    const std::size_t i = cell(y);
    return (values[i + 1] - values[i]) / step();
  }
};

void check_grid(double lo, double hi, const std::vector<double>& values) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorCode::InvalidArgument,
          "grid bounds must be finite with lo < hi");
  require(values.size() >= 3, ErrorCode::InvalidArgument, "grid needs at least three values");
  for (double v : values) check_finite(v, "grid value");
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexSpec

ConvexSpec ConvexSpec::square() { return {Kind::Square, 0.0}; }

ConvexSpec ConvexSpec::power(double a) {
  require(std::isfinite(a) && a > 1.0, ErrorCode::InvalidArgument, "power exponent a must exceed 1");
  return {Kind::Power, a};
}

ConvexSpec ConvexSpec::patton(double b) {
  check_finite(b, "Patton exponent b");
  return {Kind::Patton, b};
}

ConvexSpec ConvexSpec::bounded_rational() { return {Kind::BoundedRational, 0.0}; }
ConvexSpec ConvexSpec::negative_log() { return {Kind::NegativeLog, 0.0}; }
ConvexSpec ConvexSpec::reciprocal() { return {Kind::Reciprocal, 0.0}; }

ConvexSpec ConvexSpec::custom_grid(double lo, double hi, std::vector<double> values) {
  check_grid(lo, hi, values);
  ConvexSpec spec(Kind::CustomGrid, 0.0);
  spec.grid_lo_ = lo;
  spec.grid_hi_ = hi;
  spec.grid_values_ = std::move(values);
  spec.verify();
  return spec;
}

void ConvexSpec::verify() const {
  const auto& v = grid_values_;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i + 1] - 2.0 * v[i] + v[i - 1] < -kShapeTolerance)
      fail(ErrorCode::ConstraintViolated, "grid function is not convex near node " + std::to_string(i));
  }
}

double ConvexSpec::value(double y) const {
  switch (kind_) {
    case Kind::Square: return y * y;
    case Kind::Power: return std::pow(std::abs(y), param_);
    case Kind::Patton:
      if (param_ == 0.0) return -std::log(y);
      if (param_ == 1.0) return y * std::log(y);
      return std::pow(y, param_) / (param_ * (param_ - 1.0));
    case Kind::BoundedRational: return y * y / (1.0 + std::abs(y));
    case Kind::NegativeLog: return -std::log(y);
    case Kind::Reciprocal: return 1.0 / y;
    case Kind::CustomGrid: return GridLookup{grid_lo_, grid_hi_, grid_values_}.value(y);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double ConvexSpec::derivative(double y) const {
  switch (kind_) {
    case Kind::Square: return 2.0 * y;
    case Kind::Power: return param_ * sign(y) * std::pow(std::abs(y), param_ - 1.0);
    case Kind::Patton:
      if (param_ == 0.0) return -1.0 / y;
      if (param_ == 1.0) return std::log(y) + 1.0;
      return std::pow(y, param_ - 1.0) / (param_ - 1.0);
    case Kind::BoundedRational: {
      const double a = std::abs(y);
      return y * (a + 2.0) / ((1.0 + a) * (1.0 + a));
    }
    case Kind::NegativeLog: return -1.0 / y;
    case Kind::Reciprocal: return -1.0 / (y * y);
    case Kind::CustomGrid: return GridLookup{grid_lo_, grid_hi_, grid_values_}.slope(y);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::optional<double> ConvexSpec::second_derivative(double y) const {
  switch (kind_) {
    case Kind::Square: return 2.0;
    case Kind::Power: return param_ * (param_ - 1.0) * std::pow(std::abs(y), param_ - 2.0);
    case Kind::Patton: return std::pow(y, param_ - 2.0);
    case Kind::BoundedRational: return 2.0 / std::pow(1.0 + std::abs(y), 3.0);
    case Kind::NegativeLog: return 1.0 / (y * y);
    case Kind::Reciprocal: return 2.0 / (y * y * y);
    case Kind::CustomGrid: return std::nullopt;
  }
  return std::nullopt;
}

Interval ConvexSpec::domain() const {
  switch (kind_) {
    case Kind::Patton:
    case Kind::NegativeLog:
    case Kind::Reciprocal:
      return Interval::positive();
    case Kind::CustomGrid:
      return Interval::closed(grid_lo_, grid_hi_);
    default:
      return Interval::real_line();
  }
}

std::string ConvexSpec::label() const {
  switch (kind_) {
    case Kind::Square: return "square";
    case Kind::Power: return "power(" + format_number(param_) + ")";
    case Kind::Patton: return "patton(" + format_number(param_) + ")";
    case Kind::BoundedRational: return "bounded-rational";
    case Kind::NegativeLog: return "negative-log";
    case Kind::Reciprocal: return "reciprocal";
    case Kind::CustomGrid: return "custom-grid";
  }
  return "unknown";
}

std::optional<double> ConvexSpec::homogeneity() const {
  switch (kind_) {
    case Kind::Square: return 2.0;
    case Kind::Power:
    case Kind::Patton:
      return param_;
    case Kind::NegativeLog: return 0.0;
    case Kind::Reciprocal: return -1.0;
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// MonotoneSpec

MonotoneSpec MonotoneSpec::identity() { return {Kind::Identity, 0.0}; }
MonotoneSpec MonotoneSpec::log() { return {Kind::Log, 0.0}; }

MonotoneSpec MonotoneSpec::power(double b) {
  check_finite(b, "power exponent b");
  return {Kind::Power, b};
}

MonotoneSpec MonotoneSpec::logistic() { return {Kind::Logistic, 0.0}; }

MonotoneSpec MonotoneSpec::custom_grid(double lo, double hi, std::vector<double> values) {
  check_grid(lo, hi, values);
  MonotoneSpec spec(Kind::CustomGrid, 0.0);
  spec.grid_lo_ = lo;
  spec.grid_hi_ = hi;
  spec.grid_values_ = std::move(values);
  spec.verify();
  return spec;
}

void MonotoneSpec::verify() const {
  const auto& v = grid_values_;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] - v[i - 1] < -kShapeTolerance)
      fail(ErrorCode::ConstraintViolated, "grid function decreases near node " + std::to_string(i));
  }
}

double MonotoneSpec::value(double x) const {
  switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Log: return std::log(x);
    case Kind::Power: return param_ == 0.0 ? std::log(x) : std::pow(x, param_) / param_;
    case Kind::Logistic: return 1.0 / (1.0 + std::exp(-x));
    case Kind::CustomGrid: return GridLookup{grid_lo_, grid_hi_, grid_values_}.value(x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double MonotoneSpec::derivative(double x) const {
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Log: return 1.0 / x;
    case Kind::Power: return std::pow(x, param_ - 1.0);
    case Kind::Logistic: {
      const double s = 1.0 / (1.0 + std::exp(-x));
      return s * (1.0 - s);
    }
    case Kind::CustomGrid: return GridLookup{grid_lo_, grid_hi_, grid_values_}.slope(x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Interval MonotoneSpec::domain() const {
  switch (kind_) {
    case Kind::Log:
    case Kind::Power:
      return Interval::positive();
    case Kind::CustomGrid:
      return Interval::closed(grid_lo_, grid_hi_);
    default:
      return Interval::real_line();
  }
}

std::string MonotoneSpec::label() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Log: return "log";
    case Kind::Power: return "power(" + format_number(param_) + ")";
    case Kind::Logistic: return "logistic";
    case Kind::CustomGrid: return "custom-grid";
  }
  return "unknown";
}

std::optional<double> MonotoneSpec::homogeneity() const {
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Log: return 0.0;
    case Kind::Power: return param_;
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// ScoringFunction

ScoringFunction::ScoringFunction(Variant v, Interval forecast_domain, Interval observation_domain,
                                 std::optional<Functional> t)
    : value_(std::move(v)),
      forecast_domain_(forecast_domain),
      observation_domain_(observation_domain),
      elicits_(std::move(t)) {}

ScoringFunction ScoringFunction::se() {
  ScoringFunction s(SE{}, Interval::real_line(), Interval::real_line(), Functional::mean());
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::ae() {
  ScoringFunction s(AE{}, Interval::real_line(), Interval::real_line(), Functional::median());
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::ape() {
  ScoringFunction s(APE{}, Interval::positive(), Interval::positive(), Functional::beta_median(-1.0));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::re() {
  ScoringFunction s(RE{}, Interval::positive(), Interval::positive(), Functional::beta_median(1.0));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::beta_median(double beta) {
  require(std::isfinite(beta) && beta != 0.0, ErrorCode::InvalidArgument, "beta must be finite and nonzero");
  ScoringFunction s(BetaMedianScore{beta}, Interval::positive(), Interval::positive(),
                    Functional::beta_median(beta));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::bregman(ConvexSpec phi) {
  const Interval d = phi.domain();
  ScoringFunction s(Bregman{std::move(phi)}, d, d, Functional::mean());
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::power_bregman(double a) {
  require(std::isfinite(a) && a > 1.0, ErrorCode::InvalidArgument, "power exponent a must exceed 1");
  ScoringFunction s(PowerBregman{a}, Interval::real_line(), Interval::real_line(), Functional::mean());
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::patton(double b) {
  check_finite(b, "Patton exponent b");
  ScoringFunction s(Patton{b}, Interval::positive(), Interval::positive(), Functional::mean());
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::pinball(double alpha) {
  check_level(alpha, "quantile level alpha");
  ScoringFunction s(Pinball{alpha}, Interval::real_line(), Interval::real_line(), Functional::quantile(alpha));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::gpl(double alpha, MonotoneSpec g) {
  check_level(alpha, "quantile level alpha");
  const Interval d = g.domain();
  ScoringFunction s(GPL{alpha, std::move(g)}, d, d, Functional::quantile(alpha));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::gpl_power(double alpha, double b) {
  check_level(alpha, "quantile level alpha");
  check_finite(b, "power exponent b");
  ScoringFunction s(GPLPower{alpha, b}, Interval::positive(), Interval::positive(), Functional::quantile(alpha));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::asym_quadratic(double tau) {
  check_level(tau, "expectile level tau");
  ScoringFunction s(AsymQuadratic{tau}, Interval::real_line(), Interval::real_line(), Functional::expectile(tau));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::expectile_bregman(double tau, ConvexSpec phi) {
  check_level(tau, "expectile level tau");
  const Interval d = phi.domain();
  ScoringFunction s(ExpectileBregman{tau, std::move(phi)}, d, d, Functional::expectile(tau));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::ratio_bregman(ConvexSpec phi, NamedFn r, NamedFn s_fn,
                                               std::optional<Interval> observations) {
  const Interval fd = phi.domain();
  Interval od = phi.domain().intersect(r.domain()).intersect(s_fn.domain());
  if (observations) od = od.intersect(*observations);
  for (double y : probe_points(od, 50)) {
    require(s_fn(y) > 0.0, ErrorCode::DomainError, "ratio denominator s must be positive on the domain");
  }
  Functional t = Functional::ratio(r, s_fn);
  ScoringFunction s(RatioBregman{std::move(phi), std::move(r), std::move(s_fn)}, fd, od, std::move(t));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::squared_relative_error() {
  ScoringFunction s(SquaredRelativeError{}, Interval::positive(), Interval::positive(),
                    Functional::ratio(NamedFn::square(), NamedFn::identity()));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::obs_weighted_se() {
  ScoringFunction s(ObsWeightedSE{}, Interval::positive(), Interval::positive(),
                    Functional::ratio(NamedFn::square(), NamedFn::identity()));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::zero_one(double c) {
  require(std::isfinite(c) && c > 0.0, ErrorCode::InvalidArgument, "half-width c must be positive");
  ScoringFunction s(ZeroOne{c}, Interval::real_line(), Interval::real_line(), Functional::modal_midpoint(c));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::survival(double k) {
  require(std::isfinite(k) && k > 1.0, ErrorCode::InvalidArgument, "survival factor k must exceed 1");
  ScoringFunction s(Survival{k}, Interval::positive(), Interval::positive(),
                    Functional::conjugated(Functional::modal_midpoint(std::log(k)), Bijection::log()));
  s.verify_diagonal();
  return s;
}

ScoringFunction ScoringFunction::custom(std::string label, std::function<double(double, double)> fn,
                                        Interval forecast_domain, Interval observation_domain) {
  require(static_cast<bool>(fn), ErrorCode::InvalidArgument, "custom score is empty");
  ScoringFunction s(Custom{std::move(label), std::move(fn)}, forecast_domain, observation_domain, std::nullopt);
  s.verify_diagonal();
  return s;
}

void ScoringFunction::verify_diagonal() const {
  const auto xs = probe_points(forecast_domain_, 50);
  const auto ys = probe_points(observation_domain_, 50);
  for (double x : xs) {
    for (double y : ys) {
      const double v = (*this)(x, y);
      if (!(v >= -kDiagonalTolerance))
        fail(ErrorCode::ConstraintViolated, label() + " is negative at (" + format_number(x) + ", " +
                                                format_number(y) + "): " + format_number(v));
    }
  }
  for (double y : ys) {
    if (!forecast_domain_.contains(y)) continue;
    const double v = (*this)(y, y);
    if (!(std::abs(v) <= kDiagonalTolerance))
      fail(ErrorCode::ConstraintViolated, label() + " is not zero on the diagonal at y=" + format_number(y));
  }
}

double ScoringFunction::operator()(double x, double y) const {
  if (!forecast_domain_.contains(x))
    fail(ErrorCode::DomainError, "forecast x=" + format_number(x) + " outside " + forecast_domain_.to_string() +
                                     " for " + label());
  if (!observation_domain_.contains(y))
    fail(ErrorCode::DomainError, "observation y=" + format_number(y) + " outside " +
                                     observation_domain_.to_string() + " for " + label());
  const double ind = x >= y ? 1.0 : 0.0;
  return std::visit(
      Overloaded{
          [&](const SE&) { return (x - y) * (x - y); },
          [&](const AE&) { return std::abs(x - y); },
          [&](const APE&) { return std::abs(x - y) / std::abs(y); },
          [&](const RE&) { return std::abs(x - y) / std::abs(x); },
          [&](const BetaMedianScore& s) { return std::abs(1.0 - std::pow(y / x, s.beta)); },
          [&](const Bregman& s) { return s.phi.value(y) - s.phi.value(x) - s.phi.derivative(x) * (y - x); },
          [&](const PowerBregman& s) {
            const double ax = std::abs(x);
            return std::pow(std::abs(y), s.a) - std::pow(ax, s.a) - s.a * sign(x) * std::pow(ax, s.a - 1.0) * (y - x);
          },
          [&](const Patton& s) {
            const double b = s.b;
            if (b == 0.0) return y / x - std::log(y / x) - 1.0;
            if (b == 1.0) return y * std::log(y / x) - y + x;
            return (std::pow(y, b) - std::pow(x, b)) / (b * (b - 1.0)) - std::pow(x, b - 1.0) * (y - x) / (b - 1.0);
          },
          [&](const Pinball& s) { return (ind - s.alpha) * (x - y); },
          [&](const GPL& s) { return (ind - s.alpha) * (s.g.value(x) - s.g.value(y)); },
          [&](const GPLPower& s) {
            if (s.b == 0.0) return (ind - s.alpha) * std::log(x / y);
            return (ind - s.alpha) * (std::pow(x, s.b) - std::pow(y, s.b)) / s.b;
          },
          [&](const AsymQuadratic& s) { return std::abs(ind - s.tau) * (x - y) * (x - y); },
          [&](const ExpectileBregman& s) {
            return std::abs(ind - s.tau) * (s.phi.value(y) - s.phi.value(x) - s.phi.derivative(x) * (y - x));
          },
          [&](const RatioBregman& s) {
            const double ry = s.r(y);
            const double sy = s.s(y);
            return sy * (s.phi.value(y) - s.phi.value(x)) - s.phi.derivative(x) * (ry - x * sy) +
                   s.phi.derivative(y) * (ry - y * sy);
          },
          [&](const SquaredRelativeError&) { return (x - y) * (x - y) / (x * x); },
          [&](const ObsWeightedSE&) { return y * (x - y) * (x - y); },
          [&](const ZeroOne& s) { return std::abs(x - y) > s.c ? 1.0 : 0.0; },
          [&](const Survival& s) { return (y >= x / s.k && y <= s.k * x) ? 0.0 : 1.0; },
          [&](const Weighted& s) { return s.w(y) * (*s.base)(x, y); },
          [&](const Revealed& s) { return (*s.base)(s.g.inverse(x), y); },
          [&](const Mixture& s) {
            double total = 0.0;
            for (const auto& c : s.components) total += c.weight * (*c.score)(x, y);
            return total;
          },
          [&](const Custom& s) { return s.fn(x, y); },
      },
      value_);
}

std::string ScoringFunction::family() const {
  return std::visit(Overloaded{
                        [](const SE&) { return "se"; },
                        [](const AE&) { return "ae"; },
                        [](const APE&) { return "ape"; },
                        [](const RE&) { return "re"; },
                        [](const BetaMedianScore&) { return "beta-median"; },
                        [](const Bregman&) { return "bregman"; },
                        [](const PowerBregman&) { return "power-bregman"; },
                        [](const Patton&) { return "patton"; },
                        [](const Pinball&) { return "pinball"; },
                        [](const GPL&) { return "gpl"; },
                        [](const GPLPower&) { return "gpl-power"; },
                        [](const AsymQuadratic&) { return "asym-quadratic"; },
                        [](const ExpectileBregman&) { return "expectile-bregman"; },
                        [](const RatioBregman&) { return "ratio-bregman"; },
                        [](const SquaredRelativeError&) { return "squared-relative-error"; },
                        [](const ObsWeightedSE&) { return "obs-weighted-se"; },
                        [](const ZeroOne&) { return "zero-one"; },
                        [](const Survival&) { return "survival"; },
                        [](const Weighted&) { return "weighted"; },
                        [](const Revealed&) { return "revelation"; },
                        [](const Mixture&) { return "mixture"; },
                        [](const Custom&) { return "custom"; },
                    },
                    value_);
}

std::string ScoringFunction::label() const {
  const auto n = [](double v) { return format_number(v); };
  return std::visit(
      Overloaded{
          [&](const BetaMedianScore& s) { return "beta-median(" + n(s.beta) + ")"; },
          [&](const Bregman& s) { return "bregman(" + s.phi.label() + ")"; },
          [&](const PowerBregman& s) { return "power-bregman(" + n(s.a) + ")"; },
          [&](const Patton& s) { return "patton(" + n(s.b) + ")"; },
          [&](const Pinball& s) { return "pinball(" + n(s.alpha) + ")"; },
          [&](const GPL& s) { return "gpl(" + n(s.alpha) + "; " + s.g.label() + ")"; },
          [&](const GPLPower& s) { return "gpl-power(" + n(s.alpha) + "; " + n(s.b) + ")"; },
          [&](const AsymQuadratic& s) { return "asym-quadratic(" + n(s.tau) + ")"; },
          [&](const ExpectileBregman& s) { return "expectile-bregman(" + n(s.tau) + "; " + s.phi.label() + ")"; },
          [&](const RatioBregman& s) {
            return "ratio-bregman(" + s.phi.label() + "; " + s.r.label() + "/" + s.s.label() + ")";
          },
          [&](const ZeroOne& s) { return "zero-one(" + n(s.c) + ")"; },
          [&](const Survival& s) { return "survival(" + n(s.k) + ")"; },
          [&](const Weighted& s) { return "weighted(" + s.base->label() + "; " + s.w.label() + ")"; },
          [&](const Revealed& s) { return "revelation(" + s.base->label() + "; " + s.g.label() + ")"; },
          [&](const Mixture& s) {
            std::string out = "mixture(";
            for (std::size_t i = 0; i < s.components.size(); ++i) {
              if (i > 0) out += " + ";
              out += n(s.components[i].weight) + "*" + s.components[i].score->label();
            }
            return out + ")";
          },
          [&](const Custom& s) { return "custom(" + s.label + ")"; },
          [&](const auto&) { return family(); },
      },
      value_);
}

std::vector<double> ScoringFunction::kinks(double y) const {
  return std::visit(
      Overloaded{
          [&](const SE&) { return std::vector<double>{}; },
          [&](const PowerBregman&) { return std::vector<double>{}; },
          [&](const Patton&) { return std::vector<double>{}; },
          [&](const SquaredRelativeError&) { return std::vector<double>{}; },
          [&](const ObsWeightedSE&) { return std::vector<double>{}; },
          [&](const Bregman& s) {
            std::vector<double> out;
            if (s.phi.kind() == ConvexSpec::Kind::CustomGrid) {
              const auto m = s.phi.grid_values().size();
              const double step = (s.phi.grid_hi() - s.phi.grid_lo()) / static_cast<double>(m - 1);
              for (std::size_t i = 0; i < m; ++i) out.push_back(s.phi.grid_lo() + static_cast<double>(i) * step);
            }
            return out;
          },
          [&](const RatioBregman&) { return std::vector<double>{}; },
          [&](const ZeroOne& s) { return std::vector<double>{y - s.c, y + s.c}; },
          [&](const Survival& s) { return std::vector<double>{y / s.k, y * s.k}; },
          [&](const Weighted& s) { return s.base->kinks(y); },
          [&](const Revealed& s) {
            std::vector<double> out;
            for (double k : s.base->kinks(y)) {
              if (s.base->forecast_domain().contains(k)) out.push_back(s.g(k));
            }
            return out;
          },
          [&](const Mixture& s) {
            std::vector<double> out;
            for (const auto& c : s.components) {
              const auto k = c.score->kinks(y);
              out.insert(out.end(), k.begin(), k.end());
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
          },
          [&](const auto&) { return std::vector<double>{y}; },
      },
      value_);
}

std::optional<double> ScoringFunction::observation_power() const {
  if (std::holds_alternative<APE>(value_)) return -1.0;
  if (std::holds_alternative<RE>(value_)) return 1.0;
  if (const auto* s = std::get_if<BetaMedianScore>(&value_)) return s->beta;
  return std::nullopt;
}

bool ScoringFunction::serializable() const {
  return std::visit(Overloaded{
                        [](const RatioBregman& s) { return s.r.serializable() && s.s.serializable(); },
                        [](const Weighted& s) { return s.w.fn().serializable() && s.base->serializable(); },
                        [](const Revealed& s) {
                          return s.g.forward_fn().serializable() && s.g.inverse_fn().serializable() &&
                                 s.base->serializable();
                        },
                        [](const Mixture& s) {
                          return std::all_of(s.components.begin(), s.components.end(),
                                             [](const Component& c) { return c.score->serializable(); });
                        },
                        [](const Custom&) { return false; },
                        [](const auto&) { return true; },
                    },
                    value_);
}

// ---------------------------------------------------------------------------
// Transforms

ScoringFunction weighted_score(const ScoringFunction& s, const WeightFn& w) {
  const Interval od = s.observation_domain().intersect(w.fn().domain());
  for (double y : probe_points(od, 50)) (void)w(y);
  std::optional<Functional> t;
  if (s.elicits()) t = Functional::weighted(*s.elicits(), w);
  return ScoringFunction(ScoringFunction::Weighted{std::make_shared<const ScoringFunction>(s), w},
                         s.forecast_domain(), od, std::move(t));
}

ScoringFunction revelation_transform(const ScoringFunction& s, const Bijection& g) {
  const Interval base = s.forecast_domain().intersect(g.forward_fn().domain());
  const Interval fd = g.image(base);
  for (double x : probe_points(base, 50)) {
    const double back = g.inverse(g(x));
    if (!(std::abs(back - x) <= 1e-9 * std::max(1.0, std::abs(x))))
      fail(ErrorCode::InverseMismatch, "inverse of " + g.label() + " fails at x=" + format_number(x));
  }
  for (double u : probe_points(fd, 50)) {
    const double fwd = g(g.inverse(u));
    if (!(std::abs(fwd - u) <= 1e-9 * std::max(1.0, std::abs(u))))
      fail(ErrorCode::InverseMismatch, g.label() + " of its inverse deviates at x=" + format_number(u));
  }
  std::optional<Functional> t;
  if (s.elicits()) t = Functional::transformed(*s.elicits(), g);
  return ScoringFunction(ScoringFunction::Revealed{std::make_shared<const ScoringFunction>(s), g}, fd,
                         s.observation_domain(), std::move(t));
}

ScoringFunction mixture_score(const std::vector<std::pair<ScoringFunction, double>>& components) {
  require(!components.empty(), ErrorCode::InvalidArgument, "mixture needs at least one component");
  const auto& first = components.front().first;
  require(first.elicits().has_value(), ErrorCode::MixedFunctionals, "mixture components need functional metadata");
  ScoringFunction::Mixture mix;
  Interval fd = Interval::real_line();
  Interval od = Interval::real_line();
  for (const auto& [score, weight] : components) {
    require(std::isfinite(weight) && weight > 0.0, ErrorCode::InvalidArgument, "mixture weights must be positive");
    if (!score.elicits() || !(*score.elicits() == *first.elicits()))
      fail(ErrorCode::MixedFunctionals, score.label() + " does not elicit " + first.elicits()->label());
    fd = fd.intersect(score.forecast_domain());
    od = od.intersect(score.observation_domain());
    mix.components.push_back({std::make_shared<const ScoringFunction>(score), weight});
  }
  return ScoringFunction(std::move(mix), fd, od, first.elicits());
}

double induced_proper_score(const ScoringFunction& s, const Functional& t, const Distribution& f, double y) {
  return s(functionals::evaluate(t, f).representative, y);
}

double expected_score(const ScoringFunction& s, double x, const Distribution& dist) {
  return measures::expectation(dist, [&](double y) { return s(x, y); });
}

std::vector<double> probe_points(const Interval& domain, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  const auto lin = [&](double lo, double hi) {
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  };
  const bool lo_inf = !std::isfinite(domain.lo);
  const bool hi_inf = !std::isfinite(domain.hi);
  if (lo_inf && hi_inf) {
    lin(-5.0, 5.0);
  } else if (!lo_inf && hi_inf) {
    // Geometric offsets above the lower end.
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
      out.push_back(domain.lo + 0.05 * std::pow(400.0, t));
    }
  } else if (lo_inf && !hi_inf) {
    for (std::size_t i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
      out.push_back(domain.hi - 0.05 * std::pow(400.0, t));
    }
  } else {
    const double pad = 1e-6 * domain.width();
    lin(domain.lo + (domain.lo_open ? pad : 0.0), domain.hi - (domain.hi_open ? pad : 0.0));
  }
  return out;
}

std::optional<double> homogeneity_order(const ScoringFunction& s) {
  using SF = ScoringFunction;
  std::optional<double> candidate = std::visit(
      Overloaded{
          [](const SF::SE&) -> std::optional<double> { return 2.0; },
          [](const SF::AE&) -> std::optional<double> { return 1.0; },
          [](const SF::APE&) -> std::optional<double> { return 0.0; },
          [](const SF::RE&) -> std::optional<double> { return 0.0; },
          [](const SF::BetaMedianScore&) -> std::optional<double> { return 0.0; },
          [](const SF::Bregman& b) { return b.phi.homogeneity(); },
          [](const SF::PowerBregman& b) -> std::optional<double> { return b.a; },
          [](const SF::Patton& b) -> std::optional<double> { return b.b; },
          [](const SF::Pinball&) -> std::optional<double> { return 1.0; },
          [](const SF::GPL& g) { return g.g.homogeneity(); },
          [](const SF::GPLPower& g) -> std::optional<double> { return g.b; },
          [](const SF::AsymQuadratic&) -> std::optional<double> { return 2.0; },
          [](const SF::ExpectileBregman& e) { return e.phi.homogeneity(); },
          [](const SF::SquaredRelativeError&) -> std::optional<double> { return 0.0; },
          [](const SF::ObsWeightedSE&) -> std::optional<double> { return 3.0; },
          [](const SF::ZeroOne&) -> std::optional<double> { return std::nullopt; },
          [](const SF::Survival&) -> std::optional<double> { return 0.0; },
          [](const auto&) -> std::optional<double> { return std::nullopt; },
      },
      s.variant());

  const bool family_decided = std::visit(
      Overloaded{
          [](const SF::Bregman&) { return true; },
          [](const SF::GPL&) { return true; },
          [](const SF::ExpectileBregman&) { return true; },
          [](const SF::ZeroOne&) { return true; },
          [](const SF::RatioBregman&) { return false; },
          [](const SF::Weighted&) { return false; },
          [](const SF::Revealed&) { return false; },
          [](const SF::Mixture&) { return false; },
          [](const SF::Custom&) { return false; },
          [](const auto&) { return true; },
      },
      s.variant());

  const auto xs = probe_points(s.forecast_domain(), 9);
  const auto ys = probe_points(s.observation_domain(), 9);
  try {
    if (!candidate && !family_decided) {
      for (double x : xs) {
        for (double y : ys) {
          const double base = s(x, y);
          if (!(base > 1e-8)) continue;
          const double scaled = s(2.0 * x, 2.0 * y);
          if (!(scaled > 0.0)) return std::nullopt;
          candidate = std::log2(scaled / base);
          break;
        }
        if (candidate) break;
      }
    }
    if (!candidate) return std::nullopt;
    std::vector<double> factors{0.5, 2.0, 3.0};
    const bool real_line = !std::isfinite(s.forecast_domain().lo) && !std::isfinite(s.observation_domain().lo);
    if (real_line) {
      factors.push_back(-1.0);
      factors.push_back(-2.0);
    }
    for (double c : factors) {
      const double mult = std::pow(std::abs(c), *candidate);
      for (double x : xs) {
        for (double y : ys) {
          if (!s.forecast_domain().contains(c * x) || !s.observation_domain().contains(c * y)) return std::nullopt;
          const double lhs = s(c * x, c * y);
          const double rhs = mult * s(x, y);
          if (std::abs(lhs - rhs) > 1e-8 * (1.0 + std::abs(rhs))) return std::nullopt;
        }
      }
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  // Snap near-integers produced by the numeric estimate.
  const double r = std::round(*candidate);
  if (std::abs(*candidate - r) < 1e-9) return r;
  return candidate;
}

}  // namespace scorelab
