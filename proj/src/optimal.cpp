#include "scorelab/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"

namespace scorelab {

namespace {

constexpr std::size_t kMaxKinkAtoms = 2048;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cancel(const BayesOptions& options) {
  if (options.cancel != nullptr && options.cancel->load(std::memory_order_relaxed))
    fail(ErrorCode::Cancelled, "minimization cancelled");
}

/// Forecast-space span that contains the minimizer for observations in
/// [ylo, yhi]: the observation range widened by the kinks at its ends, and
/// mapped through any revelation transform.
Interval forecast_span(const ScoringFunction& s, double ylo, double yhi) {
  using SF = ScoringFunction;
  if (const auto* r = std::get_if<SF::Revealed>(&s.variant())) {
    const Interval inner = r->g.image(forecast_span(*r->base, ylo, yhi));
    return Interval::closed(inner.lo, inner.hi);
  }
  if (const auto* w = std::get_if<SF::Weighted>(&s.variant())) return forecast_span(*w->base, ylo, yhi);
  if (const auto* m = std::get_if<SF::Mixture>(&s.variant())) {
    double lo = kInf;
    double hi = -kInf;
    for (const auto& c : m->components) {
      const Interval part = forecast_span(*c.score, ylo, yhi);
      lo = std::min(lo, part.lo);
      hi = std::max(hi, part.hi);
    }
    return Interval::closed(lo, hi);
  }
  double lo = ylo;
  double hi = yhi;
  for (double y : {ylo, yhi}) {
    for (double k : s.kinks(y)) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  return Interval::closed(lo, hi);
}

/// Closed search bounds inside the forecast domain.
std::pair<double, double> search_bounds(const Distribution& dist, const ScoringFunction& s,
                                        const std::optional<Interval>& bounds) {
  Interval b = bounds ? *bounds : forecast_span(s, dist.min_point(), dist.max_point());
  b = b.intersect(s.forecast_domain());
  require(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo <= b.hi, ErrorCode::InvalidArgument,
          "search bounds " + b.to_string() + " are empty or unbounded");
  double lo = b.lo;
  double hi = b.hi;
  const double nudge = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi), hi - lo});
  if (!s.forecast_domain().contains(lo) || b.lo_open) lo += nudge;
  if (!s.forecast_domain().contains(hi) || b.hi_open) hi -= nudge;
  require(lo <= hi, ErrorCode::InvalidArgument, "search bounds collapse inside the forecast domain");
  return {lo, hi};
}

}  // namespace

std::string to_string(BayesSolution::Method method) {
  switch (method) {
    case BayesSolution::Method::ClosedForm: return "closed-form";
    case BayesSolution::Method::GridGolden: return "grid+golden";
    case BayesSolution::Method::RootOfIdentification: return "root-of-identification";
  }
  return "unknown";
}

std::string to_string(BayesSolution::Outcome outcome) {
  switch (outcome) {
    case BayesSolution::Outcome::Minimum: return "minimum";
    case BayesSolution::Outcome::MonotoneToLower: return "monotone-to-lower";
    case BayesSolution::Outcome::MonotoneToUpper: return "monotone-to-upper";
  }
  return "unknown";
}

BayesSolution bayes_rule_numeric(const Distribution& dist, const ScoringFunction& s, std::optional<Interval> bounds,
                                 const BayesOptions& options) {
  require(options.coarse_points >= 3, ErrorCode::InvalidArgument, "coarse grid needs at least three points");
  const auto [lo, hi] = search_bounds(dist, s, bounds);

  // Laws whose discretization hides an infinite moment: the expected score is
  // infinite everywhere and the search would only chase the discretization.
  if (const auto beta = s.observation_power(); beta && dist.parametric_spec() && !dist.power_moment_finite(*beta)) {
    BayesSolution out;
    const bool lower = *beta < 0.0;
    out.representative = out.lo = out.hi = lower ? lo : hi;
    out.expected_score = kInf;
    out.method = BayesSolution::Method::GridGolden;
    out.outcome = lower ? BayesSolution::Outcome::MonotoneToLower : BayesSolution::Outcome::MonotoneToUpper;
    return out;
  }

  auto objective = [&](double x) { return expected_score(s, x, dist); };
  if (lo == hi) {
    const double v = objective(lo);
    require(std::isfinite(v), ErrorCode::NonFinite, "expected score is not finite at the only feasible point");
    return {lo, lo, hi, v, BayesSolution::Method::GridGolden, BayesSolution::Outcome::Minimum};
  }

  std::vector<double> xs;
  xs.reserve(options.coarse_points + 4 * std::min(dist.size(), kMaxKinkAtoms));
  for (std::size_t i = 0; i < options.coarse_points; ++i)
    xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(options.coarse_points - 1));
  if (dist.size() <= kMaxKinkAtoms) {
    std::vector<double> kinks;
    for (double y : dist.points()) {
      for (double k : s.kinks(y)) {
        if (k >= lo && k <= hi) kinks.push_back(k);
      }
    }
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
    for (std::size_t i = 0; i < kinks.size(); ++i) {
      xs.push_back(kinks[i]);
      if (i + 1 < kinks.size()) xs.push_back(0.5 * (kinks[i] + kinks[i + 1]));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> fs(xs.size());
  bool any_finite = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i % 64 == 0) check_cancel(options);
    fs[i] = objective(xs[i]);
    if (std::isfinite(fs[i])) any_finite = true;
    else fs[i] = kInf;
  }
  require(any_finite, ErrorCode::NonFinite, "expected score diverges at every probed forecast for " + s.label());

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t keep = std::min<std::size_t>(3, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });

  double best_x = xs[order[0]];
  double best_f = fs[order[0]];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t r = 0; r < keep; ++r) {
    const std::size_t i = order[r];
    double a = xs[i == 0 ? 0 : i - 1];
    double b = xs[i + 1 < xs.size() ? i + 1 : i];
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > options.golden_tolerance * std::max(1.0, std::abs(a))) {
      check_cancel(options);
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = objective(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = objective(d);
      }
    }
    for (const auto& [x, f] : {std::pair{c, fc}, std::pair{d, fd}}) {
      if (f < best_f) {
        best_f = f;
        best_x = x;
      }
    }
  }

  // Flat minimum: the threshold set around best_x, with edges refined by bisection.
  const double threshold = best_f + options.flat_threshold * std::max(1.0, std::abs(best_f));
  const auto pos = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), best_x) - xs.begin());
  auto edge = [&](double inside, double outside) {
    for (int iter = 0; iter < 200; ++iter) {
      if (std::abs(outside - inside) <= 1e-12 * std::max(1.0, std::abs(inside))) break;
      const double mid = 0.5 * (inside + outside);
      if (objective(mid) <= threshold) inside = mid;
      else outside = mid;
    }
    return inside;
  };
  double left = best_x;
  {
    std::size_t j = pos;
    double inside = best_x;
    bool closed = false;
    while (j > 0) {
      --j;
      if (xs[j] >= inside) continue;
      if (fs[j] <= threshold) inside = xs[j];
      else {
        left = edge(inside, xs[j]);
        closed = true;
        break;
      }
    }
    if (!closed) left = inside;
  }
  double right = best_x;
  {
    double inside = best_x;
    bool closed = false;
    for (std::size_t j = pos; j < xs.size(); ++j) {
      if (xs[j] <= inside) continue;
      if (fs[j] <= threshold) inside = xs[j];
      else {
        right = edge(inside, xs[j]);
        closed = true;
        break;
      }
    }
    if (!closed) right = inside;
  }

  BayesSolution out;
  out.lo = left;
  out.hi = right;
  out.representative = 0.5 * (left + right);
  out.expected_score = objective(out.representative);
  if (!(out.expected_score <= threshold)) {
    out.representative = best_x;
    out.expected_score = best_f;
  }
  out.method = BayesSolution::Method::GridGolden;
  out.outcome = BayesSolution::Outcome::Minimum;
  return out;
}

BayesSolution bayes_rule_closed(const Distribution& dist, const ScoringFunction& s) {
  if (!s.elicits()) fail(ErrorCode::NoClosedForm, s.label() + " carries no elicited functional");
  const FunctionalValue v = functionals::evaluate(*s.elicits(), dist);
  BayesSolution out;
  out.representative = v.representative;
  out.lo = v.set_lo;
  out.hi = v.set_hi;
  try {
    out.expected_score = expected_score(s, v.representative, dist);
  } catch (const Error&) {
    out.expected_score = std::numeric_limits<double>::quiet_NaN();
  }
  out.method = BayesSolution::Method::ClosedForm;
  return out;
}

BayesSolution bayes_rule_root(const Distribution& dist, const ScoringFunction& s) {
  if (!s.elicits()) fail(ErrorCode::NoClosedForm, s.label() + " carries no elicited functional");
  const Functional& t = *s.elicits();
  const bool supported = std::holds_alternative<Functional::Mean>(t.variant()) ||
                         std::holds_alternative<Functional::Ratio>(t.variant()) ||
                         std::holds_alternative<Functional::Expectile>(t.variant());
  if (!supported) fail(ErrorCode::Unsupported, "no continuous identification function for " + t.label());
  double a = dist.min_point();
  double b = dist.max_point();
  auto residual = [&](double x) { return functionals::identification_residual(t, x, dist); };
  double root = a;
  if (a < b) {
    const double ra = residual(a);
    const double rb = residual(b);
    if (ra > 0.0 || rb < 0.0) fail(ErrorCode::NoBracket, "identification residual does not change sign");
    for (int iter = 0; iter < 200; ++iter) {
      root = 0.5 * (a + b);
      if (root <= a || root >= b) break;
      const double r = residual(root);
      if (r == 0.0) break;
      if (r < 0.0) a = root;
      else b = root;
    }
  }
  BayesSolution out;
  out.representative = out.lo = out.hi = root;
  out.expected_score = expected_score(s, root, dist);
  out.method = BayesSolution::Method::RootOfIdentification;
  return out;
}

Functional weighted_functional(const Functional& t, const WeightFn& w) { return Functional::weighted(t, w); }

double relative_error_optimum_t(double nu) {
  require(nu > 2.0, ErrorCode::InvalidArgument, "degrees of freedom must exceed 2");
  // Substituting y = z^2 turns y^{1/2} k(y) dy into 2 z^2 k(z^2) dz, which is
  // smooth at the origin.
  const bool normal = std::isinf(nu);
  auto density = [&](double z) {
    const double z2 = z * z;
    if (normal) return z2 * std::exp(-0.5 * z2);
    return z2 * std::pow(1.0 + z2 / (nu - 2.0), -0.5 * (nu + 1.0));
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto below = [&](double z) { return Quad::integrate(density, 0.0, z, 20, 1e-14); };
  auto above = [&](double z) { return Quad::integrate(density, z, kInf, 20, 1e-14); };
  auto balance = [&](double z) { return below(z) - above(z); };

  double lo = 0.0;
  double hi = 1.0;
  while (balance(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e8, ErrorCode::NoBracket, "median bracket search diverged");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (balance(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  const double z = 0.5 * (lo + hi);
  return z * z;
}

}  // namespace scorelab
