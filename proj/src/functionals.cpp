#include "scorelab/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"

namespace scorelab {

namespace {

void check_level(double level, const char* name) {
  require(level > 0.0 && level < 1.0, ErrorCode::InvalidArgument, std::string(name) + " must lie in (0, 1)");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

FunctionalValue map_value(const FunctionalValue& v, const std::function<double(double)>& g) {
  FunctionalValue out;
  double a = g(v.set_lo);
  double b = g(v.set_hi);
  if (a > b) std::swap(a, b);
  out.set_lo = a;
  out.set_hi = b;
  out.representative = v.is_set() ? 0.5 * (a + b) : g(v.representative);
  for (const Interval& c : v.components) {
    double lo = g(c.lo);
    double hi = g(c.hi);
    if (lo > hi) std::swap(lo, hi);
    out.components.push_back(Interval::closed(lo, hi));
  }
  std::sort(out.components.begin(), out.components.end(),
            [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
  return out;
}

}  // namespace

Functional Functional::quantile(double alpha) {
  check_level(alpha, "quantile level");
  return Functional(Quantile{alpha});
}

Functional Functional::expectile(double tau) {
  check_level(tau, "expectile level");
  return Functional(Expectile{tau});
}

Functional Functional::beta_median(double beta) {
  require(std::isfinite(beta), ErrorCode::InvalidArgument, "beta must be finite");
  return Functional(BetaMedian{beta});
}

Functional Functional::ratio(NamedFn r, NamedFn s) { return Functional(Ratio{std::move(r), std::move(s)}); }

Functional Functional::cvar(double alpha) {
  check_level(alpha, "CVaR level");
  return Functional(CVaR{alpha});
}

Functional Functional::modal_midpoint(double c) {
  require(std::isfinite(c) && c > 0.0, ErrorCode::InvalidArgument, "modal half-width must be positive");
  return Functional(ModalMidpoint{c});
}

Functional Functional::weighted(const Functional& inner, WeightFn w) {
  return Functional(Weighted{std::make_shared<const Functional>(inner), std::move(w)});
}

Functional Functional::transformed(const Functional& inner, Bijection g) {
  return Functional(Transformed{std::make_shared<const Functional>(inner), std::move(g)});
}

Functional Functional::conjugated(const Functional& inner, Bijection h) {
  return Functional(Conjugated{std::make_shared<const Functional>(inner), std::move(h)});
}

std::string Functional::label() const {
  return std::visit(
      Overloaded{
          [](const Mean&) -> std::string { return "mean"; },
          [](const Quantile& q) { return "quantile(" + format_number(q.alpha) + ")"; },
          [](const Expectile& e) { return "expectile(" + format_number(e.tau) + ")"; },
          [](const BetaMedian& b) { return "beta-median(" + format_number(b.beta) + ")"; },
          [](const Ratio& r) { return "ratio(" + r.r.label() + "/" + r.s.label() + ")"; },
          [](const CVaR& c) { return "cvar(" + format_number(c.alpha) + ")"; },
          [](const ModalMidpoint& m) { return "modal-midpoint(" + format_number(m.c) + ")"; },
          [](const Weighted& w) { return "weighted(" + w.inner->label() + "; " + w.w.label() + ")"; },
          [](const Transformed& t) { return "transformed(" + t.inner->label() + "; " + t.g.label() + ")"; },
          [](const Conjugated& c) { return "conjugated(" + c.inner->label() + "; " + c.h.label() + ")"; },
      },
      value_);
}

bool operator==(const Functional& a, const Functional& b) {
  if (a.value_.index() != b.value_.index()) return false;
  return std::visit(
      Overloaded{
          [&](const Functional::Weighted& x) {
            const auto& y = std::get<Functional::Weighted>(b.value_);
            return *x.inner == *y.inner && x.w == y.w;
          },
          [&](const Functional::Transformed& x) {
            const auto& y = std::get<Functional::Transformed>(b.value_);
            return *x.inner == *y.inner && x.g == y.g;
          },
          [&](const Functional::Conjugated& x) {
            const auto& y = std::get<Functional::Conjugated>(b.value_);
            return *x.inner == *y.inner && x.h == y.h;
          },
          [&](const auto& x) { return x == std::get<std::decay_t<decltype(x)>>(b.value_); },
      },
      a.value_);
}

namespace functionals {

FunctionalValue mean(const Distribution& dist) {
  if (const auto exact = dist.analytic_mean()) return FunctionalValue::point(*exact);
  return FunctionalValue::point(measures::expectation(dist, [](double y) { return y; }));
}

FunctionalValue quantile(const Distribution& dist, double alpha) {
  check_level(alpha, "quantile level");
  const Interval set = measures::quantile_set(dist, alpha);
  return FunctionalValue::interval(set.lo, set.hi);
}

FunctionalValue expectile(const Distribution& dist, double tau) {
  check_level(tau, "expectile level");
  const auto points = dist.points();
  const auto weights = dist.weights();
  auto residual = [&](double x) {
    double upper = 0.0;
    double lower = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = points[i] - x;
      if (d > 0.0) upper += weights[i] * d;
      else lower -= weights[i] * d;
    }
    return tau * upper - (1.0 - tau) * lower;
  };
  double lo = dist.min_point();
  double hi = dist.max_point();
  if (lo == hi) return FunctionalValue::point(lo);
  const double r_lo = residual(lo);
  const double r_hi = residual(hi);
  if (r_lo < 0.0 || r_hi > 0.0) fail(ErrorCode::NoBracket, "expectile residual does not change sign on the support");
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) <= 1e-14 || mid <= lo || mid >= hi) break;
    if (r > 0.0) lo = mid;
    else hi = mid;
  }
  return FunctionalValue::point(mid);
}

FunctionalValue beta_median(const Distribution& dist, double beta) {
  if (beta == 0.0) return quantile(dist, 0.5);
  require(dist.min_point() > 0.0 || (dist.parametric_spec() &&
                                      dist.parametric_spec()->family == ParametricFamily::ScaledChiSq1),
          ErrorCode::DomainError, "beta-median requires support on the positive half-axis");
  const Distribution tilted = measures::reweight(dist, WeightFn::power(beta));
  return quantile(tilted, 0.5);
}

FunctionalValue ratio_expectations(const Distribution& dist, const NamedFn& r, const NamedFn& s) {
  const double num = measures::expectation(dist, [&](double y) { return r(y); });
  const double den = measures::expectation(dist, [&](double y) {
    const double v = s(y);
    if (!(v > 0.0)) fail(ErrorCode::DomainError, "ratio denominator s must be positive, s(" + format_number(y) + ") <= 0");
    return v;
  });
  const double value = num / den;
  require(std::isfinite(value), ErrorCode::NonFinite, "ratio of expectations is not finite");
  return FunctionalValue::point(value);
}

FunctionalValue cvar(const Distribution& dist, double alpha) {
  check_level(alpha, "CVaR level");
  const auto points = dist.points();
  const auto cum = dist.cumulative();
  double sum = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double overlap = cum[i] - std::max(prev, alpha);
    if (overlap > 0.0) sum += points[i] * overlap;
    prev = cum[i];
  }
  const double value = sum / (1.0 - alpha);
  require(std::isfinite(value), ErrorCode::NonFinite, "CVaR is not finite");
  return FunctionalValue::point(value);
}

FunctionalValue modal_midpoint(const Distribution& dist, double c) {
  require(std::isfinite(c) && c > 0.0, ErrorCode::InvalidArgument, "modal half-width must be positive");
  const auto points = dist.points();
  const auto cum = dist.cumulative();
  // Probability of the closed window [x - c, x + c], with a relative slack so
  // that breakpoints computed as y +- c still include their own atom.
  auto mass = [&](double x) {
    const double slack = 1e-12 * std::max({1.0, std::abs(x), c});
    const auto lo = std::lower_bound(points.begin(), points.end(), x - c - slack) - points.begin();
    const auto hi = std::upper_bound(points.begin(), points.end(), x + c + slack) - points.begin();
    const double below = lo == 0 ? 0.0 : cum[lo - 1];
    const double upto = hi == 0 ? 0.0 : cum[hi - 1];
    return upto - below;
  };

  std::vector<double> breaks;
  breaks.reserve(2 * points.size());
  for (double y : points) {
    breaks.push_back(y - c);
    breaks.push_back(y + c);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Candidates alternate breakpoint, open-gap midpoint, breakpoint, ...
  std::vector<double> candidates;
  std::vector<bool> is_break;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    candidates.push_back(breaks[i]);
    is_break.push_back(true);
    if (i + 1 < breaks.size()) {
      candidates.push_back(0.5 * (breaks[i] + breaks[i + 1]));
      is_break.push_back(false);
    }
  }
  std::vector<double> masses(candidates.size());
  double best = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    masses[i] = mass(candidates[i]);
    best = std::max(best, masses[i]);
  }

  FunctionalValue out;
  const double tol = 1e-12;
  for (std::size_t i = 0; i < candidates.size();) {
    if (masses[i] < best - tol) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < candidates.size() && masses[j + 1] >= best - tol) ++j;
    const std::size_t first = (!is_break[i] && i > 0) ? i - 1 : i;
    const std::size_t last = (!is_break[j] && j + 1 < candidates.size()) ? j + 1 : j;
    out.components.push_back(Interval::closed(candidates[first], candidates[last]));
    i = j + 1;
  }
  auto midpoint = [](const Interval& iv) { return 0.5 * (iv.lo + iv.hi); };
  out.set_lo = midpoint(out.components.front());
  out.set_hi = midpoint(out.components.back());
  out.representative = 0.5 * (out.set_lo + out.set_hi);
  return out;
}

FunctionalValue evaluate(const Functional& t, const Distribution& dist) {
  return std::visit(
      Overloaded{
          [&](const Functional::Mean&) { return mean(dist); },
          [&](const Functional::Quantile& q) { return quantile(dist, q.alpha); },
          [&](const Functional::Expectile& e) { return expectile(dist, e.tau); },
          [&](const Functional::BetaMedian& b) { return beta_median(dist, b.beta); },
          [&](const Functional::Ratio& r) { return ratio_expectations(dist, r.r, r.s); },
          [&](const Functional::CVaR& c) { return cvar(dist, c.alpha); },
          [&](const Functional::ModalMidpoint& m) { return modal_midpoint(dist, m.c); },
          [&](const Functional::Weighted& w) { return evaluate(*w.inner, measures::reweight(dist, w.w)); },
          [&](const Functional::Transformed& tr) {
            return map_value(evaluate(*tr.inner, dist), [&](double x) { return tr.g(x); });
          },
          [&](const Functional::Conjugated& cj) {
            const Distribution pushed = dist.transformed([&](double y) { return cj.h(y); });
            return map_value(evaluate(*cj.inner, pushed), [&](double x) { return cj.h.inverse(x); });
          },
      },
      t.variant());
}

double identification_function(const Functional& t, double x, double y) {
  return std::visit(
      Overloaded{
          [&](const Functional::Mean&) { return x - y; },
          [&](const Functional::Ratio& r) { return x * r.s(y) - r.r(y); },
          [&](const Functional::Quantile& q) { return (x >= y ? 1.0 : 0.0) - q.alpha; },
          [&](const Functional::Expectile& e) { return 2.0 * std::abs((x >= y ? 1.0 : 0.0) - e.tau) * (x - y); },
          [&](const auto&) -> double {
            fail(ErrorCode::Unsupported, "no identification function tabulated for " + t.label());
          },
      },
      t.variant());
}

double identification_residual(const Functional& t, double x, const Distribution& dist) {
  // Validates support for t before integrating.
  (void)identification_function(t, x, dist.min_point());
  return measures::expectation(dist, [&](double y) { return identification_function(t, x, y); });
}

}  // namespace functionals
}  // namespace scorelab
