#include "scorelab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"
#include "scorelab/random.hpp"

namespace scorelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double unit(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

bool zero_on_diagonal(const ScoringFunction& s) {
  using SF = ScoringFunction;
  if (std::holds_alternative<SF::Revealed>(s.variant())) return false;
  if (const auto* w = std::get_if<SF::Weighted>(&s.variant())) return zero_on_diagonal(*w->base);
  if (const auto* m = std::get_if<SF::Mixture>(&s.variant())) {
    return std::all_of(m->components.begin(), m->components.end(),
                       [](const SF::Component& c) { return zero_on_diagonal(*c.score); });
  }
  return true;
}

/// Random forecasts around the support of F and the value t, kept inside the
/// forecast domain, plus a few close to t.
std::vector<double> forecast_probes(const ScoringFunction& s, const Distribution& f, double t, std::size_t count,
                                    std::mt19937_64& rng) {
  const Interval& dom = s.forecast_domain();
  const double lo0 = std::min(f.min_point(), t);
  const double hi0 = std::max(f.max_point(), t);
  const double pad = 0.5 * (hi0 - lo0) + 0.1;
  double lo = lo0 - pad;
  double hi = hi0 + pad;
  if (std::isfinite(dom.lo) && lo <= dom.lo) lo = dom.lo + 0.5 * (lo0 - dom.lo);
  if (std::isfinite(dom.hi) && hi >= dom.hi) hi = dom.hi - 0.5 * (dom.hi - hi0);
  std::vector<double> xs;
  for (std::size_t i = 0; i < count; ++i) xs.push_back(lo + (hi - lo) * unit(rng));
  const double scale = std::max(1.0, std::abs(t));
  for (double d : {1e-6, 1e-3, 1e-1}) {
    for (double sgn : {-1.0, 1.0}) xs.push_back(t + sgn * d * scale);
  }
  std::erase_if(xs, [&](double x) { return !dom.contains(x); });
  return xs;
}

double set_distance(double x, const FunctionalValue& v) {
  if (x < v.set_lo) return v.set_lo - x;
  if (x > v.set_hi) return x - v.set_hi;
  return 0.0;
}

}  // namespace

Distribution AtomGenerator::operator()(std::mt19937_64& rng) const {
  require(min_atoms >= 1 && max_atoms >= min_atoms, ErrorCode::InvalidArgument, "invalid atom count range");
  require(lo < hi, ErrorCode::InvalidArgument, "generator interval must have lo < hi");
  const auto span = static_cast<std::uint64_t>(max_atoms - min_atoms + 1);
  const int k = min_atoms + static_cast<int>(rng() % span);
  std::vector<double> points(static_cast<std::size_t>(k));
  std::vector<double> weights(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    points[static_cast<std::size_t>(i)] = lo + (hi - lo) * unit(rng);
    weights[static_cast<std::size_t>(i)] = unit(rng);
  }
  return Distribution::atoms(points, weights);
}

std::string describe(const Distribution& dist) {
  std::string out = "atoms{";
  const std::size_t shown = std::min<std::size_t>(dist.size(), 12);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += format_number(dist.points()[i]) + ":" + format_number(dist.weights()[i]);
  }
  if (shown < dist.size()) out += ", ... (" + std::to_string(dist.size()) + " atoms)";
  return out + "}";
}

ConsistencyReport audit_consistency(const ScoringFunction& s, const Functional& t, const DistributionSampler& generator,
                                    std::size_t trials, std::size_t probes, std::uint64_t seed, double tolerance) {
  ConsistencyReport report;
  report.trials = trials;
  report.tolerance = tolerance;
  report.max_violation = kNegInf;
  const bool diagonal = zero_on_diagonal(s);
  auto record = [&](double v, const std::string& where) {
    if (v > report.max_violation) {
      report.max_violation = v;
      report.worst_case = where;
    }
  };
  try {
    for (std::size_t trial = 0; trial < trials; ++trial) {
      auto rng = trial_stream(seed, trial);
      const Distribution f = generator(rng);
      const double tv = functionals::evaluate(t, f).representative;
      const double at_t = expected_score(s, tv, f);
      const auto xs = forecast_probes(s, f, tv, probes, rng);
      for (double x : xs) {
        record(at_t - expected_score(s, x, f), describe(f) + " x=" + format_number(x) + " t=" + format_number(tv));
        for (double y : f.points()) {
          const double v = s(x, y);
          if (v < -1e-12) record(-v, "negative score at x=" + format_number(x) + " y=" + format_number(y));
        }
      }
      if (diagonal) {
        for (double y : f.points()) {
          if (!s.forecast_domain().contains(y)) continue;
          const double v = std::abs(s(y, y));
          if (v > 1e-12) record(v, "nonzero diagonal at y=" + format_number(y));
        }
      }
    }
  } catch (const Error& e) {
    report.max_violation = std::numeric_limits<double>::infinity();
    report.worst_case = e.what();
  }
  report.pass = report.max_violation <= tolerance;
  return report;
}

ConvexityReport level_set_convexity(const std::string& label, const FunctionalMap& t, const Distribution& f0,
                                    const Distribution& f1, std::span<const double> p_grid, double tolerance) {
  ConvexityReport report;
  report.functional = label;
  report.p_grid.assign(p_grid.begin(), p_grid.end());
  const FunctionalValue v0 = t(f0);
  const FunctionalValue v1 = t(f1);
  double lo = std::max(v0.set_lo, v1.set_lo);
  double hi = std::min(v0.set_hi, v1.set_hi);
  const double tol = tolerance * std::max({1.0, std::abs(lo), std::abs(hi)});
  if (lo > hi + tol) return report;
  report.applicable = true;
  if (lo > hi) lo = hi = 0.5 * (lo + hi);
  report.shared_value = 0.5 * (lo + hi);
  std::vector<double> shared{report.shared_value};
  if (hi > lo) {
    shared.push_back(lo);
    shared.push_back(hi);
  }
  for (double p : p_grid) {
    const FunctionalValue vp = t(Distribution::mixture(f0, f1, p));
    double dist = 0.0;
    for (double x : shared) dist = std::max(dist, set_distance(x, vp));
    report.max_distance = std::max(report.max_distance, dist);
    if (dist > tol) report.violations.push_back({p, dist});
  }
  return report;
}

ConvexityReport level_set_convexity(const Functional& t, const Distribution& f0, const Distribution& f1,
                                    std::span<const double> p_grid, double tolerance) {
  return level_set_convexity(
      t.label(), [&](const Distribution& d) { return functionals::evaluate(t, d); }, f0, f1, p_grid, tolerance);
}

Distribution align_to_shared_value(const Functional& t, const Distribution& f0, const Distribution& f1) {
  const auto& v = t.variant();
  const double t0 = functionals::evaluate(t, f0).representative;
  const double t1 = functionals::evaluate(t, f1).representative;
  const bool translation = std::holds_alternative<Functional::Mean>(v) ||
                           std::holds_alternative<Functional::Quantile>(v) ||
                           std::holds_alternative<Functional::Expectile>(v) ||
                           std::holds_alternative<Functional::CVaR>(v) ||
                           std::holds_alternative<Functional::ModalMidpoint>(v);
  if (translation) {
    const double shift = t0 - t1;
    return f1.transformed([shift](double y) { return y + shift; });
  }
  std::optional<double> degree;
  if (const auto* r = std::get_if<Functional::Ratio>(&v)) {
    const auto dr = r->r.power_degree();
    const auto ds = r->s.power_degree();
    if (dr && ds) degree = *dr - *ds;
  } else if (std::holds_alternative<Functional::BetaMedian>(v)) {
    degree = 1.0;
  }
  if (degree && *degree != 0.0) {
    require(f0.min_point() > 0.0 && f1.min_point() > 0.0 && t0 > 0.0 && t1 > 0.0, ErrorCode::DomainError,
            "scaling alignment needs positive support");
    return f1.scaled(std::pow(t0 / t1, 1.0 / *degree));
  }
  fail(ErrorCode::Unsupported, "no equivariance available to align " + t.label());
}

CvarCounterexample cvar_counterexample(double alpha, double a, double b, double c, double d) {
  for (double v : {alpha, a, b, c, d}) require(std::isfinite(v), ErrorCode::ConstraintViolated, "parameters must be finite");
  require(alpha >= 1.0 / 3.0 && alpha < 1.0, ErrorCode::ConstraintViolated, "alpha must lie in [1/3, 1)");
  const double m = 0.5 * (b + d);
  require(a < b && b < c && c < m, ErrorCode::ConstraintViolated,
          "need a < b < c < (b+d)/2, got a=" + format_number(a) + " b=" + format_number(b) + " c=" +
              format_number(c) + " (b+d)/2=" + format_number(m));
  const std::vector<double> p1{a, b, d};
  const std::vector<double> w1{alpha, 0.5 * (1.0 - alpha), 0.5 * (1.0 - alpha)};
  const std::vector<double> p2{c, m};
  const std::vector<double> w2{alpha, 1.0 - alpha};
  CvarCounterexample out{Distribution::atoms(p1, w1), Distribution::atoms(p2, w2)};
  out.cvar_f1 = functionals::cvar(out.f1, alpha).representative;
  out.cvar_f2 = functionals::cvar(out.f2, alpha).representative;
  out.cvar_mixture = functionals::cvar(Distribution::mixture(out.f1, out.f2, 0.5), alpha).representative;
  out.shared_formula = m;
  out.mixture_formula = (b + c + 2.0 * d) / 4.0;
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); };
  out.formulas_match = close(out.cvar_f1, out.shared_formula) && close(out.cvar_f2, out.shared_formula) &&
                       close(out.cvar_mixture, out.mixture_formula);
  out.strict = out.cvar_mixture > std::max(out.cvar_f1, out.cvar_f2);
  return out;
}

OsbandReport osband_ratio_scan(const ScoringFunction& s, const Functional& t, std::span<const double> x_grid,
                               std::span<const double> y_grid) {
  require(!x_grid.empty() && !y_grid.empty(), ErrorCode::InvalidArgument, "scan grids must be nonempty");
  (void)functionals::identification_function(t, x_grid.front(), y_grid.front());
  constexpr double kMargin = 1e-3;
  OsbandReport report;
  for (double x : x_grid) {
    const double step = 1e-6 * std::max(1.0, std::abs(x));
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (double y : y_grid) {
      auto near = [&](double k) { return std::abs(x - k) < kMargin; };
      const auto kinks = s.kinks(y);
      if (near(y) || std::any_of(kinks.begin(), kinks.end(), near))
        fail(ErrorCode::KinkTooClose,
             "probe x=" + format_number(x) + " lies within 1e-3 of a kink for y=" + format_number(y));
      const double grad = (s(x + step, y) - s(x - step, y)) / (2.0 * step);
      const double v = functionals::identification_function(t, x, y);
      require(v != 0.0, ErrorCode::KinkTooClose, "identification function vanishes at x=" + format_number(x));
      const double r = grad / v;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      sum += r;
    }
    report.x.push_back(x);
    report.h.push_back(sum / static_cast<double>(y_grid.size()));
    report.spread.push_back(hi - lo);
    report.max_spread = std::max(report.max_spread, hi - lo);
  }
  return report;
}

ProprietyReport propriety_audit(const ScoringFunction& s, const Functional& t, const DistributionSampler& generator,
                                std::size_t trials, std::uint64_t seed, double tolerance) {
  ProprietyReport report;
  report.trials = trials;
  report.tolerance = tolerance;
  report.max_violation = kNegInf;
  try {
    for (std::size_t trial = 0; trial < trials; ++trial) {
      auto rng = trial_stream(seed, trial);
      const Distribution f = generator(rng);
      const Distribution g = generator(rng);
      const double own = measures::expectation(f, [&](double y) { return induced_proper_score(s, t, f, y); });
      const double tg = functionals::evaluate(t, g).representative;
      const double other = expected_score(s, tg, f);
      const double v = own - other;
      if (v > report.max_violation) {
        report.max_violation = v;
        report.worst_case = "F=" + describe(f) + " G=" + describe(g);
      }
    }
  } catch (const Error& e) {
    report.max_violation = std::numeric_limits<double>::infinity();
    report.worst_case = e.what();
  }
  report.pass = report.max_violation <= tolerance;
  return report;
}

FunctionalMap sum_of_quantiles(double alpha1, double alpha2) {
  return [alpha1, alpha2](const Distribution& d) {
    return FunctionalValue::point(functionals::quantile(d, alpha1).representative +
                                  functionals::quantile(d, alpha2).representative);
  };
}

SumOfQuantilesWitness search_sum_of_quantiles(double alpha1, double alpha2, const AtomGenerator& generator,
                                              std::size_t max_trials, std::uint64_t seed) {
  const FunctionalMap t = sum_of_quantiles(alpha1, alpha2);
  const std::string label = "sum-of-quantiles(" + format_number(alpha1) + ", " + format_number(alpha2) + ")";
  const std::vector<double> p_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  SumOfQuantilesWitness out;
  for (std::size_t trial = 0; trial < max_trials; ++trial) {
    auto rng = trial_stream(seed, trial);
    const Distribution f0 = generator(rng);
    const Distribution f1 = generator(rng);
    // The sum moves by 2 s under a shift by s.
    const double shift = 0.5 * (t(f0).representative - t(f1).representative);
    const Distribution moved = f1.transformed([shift](double y) { return y + shift; });
    ConvexityReport report = level_set_convexity(label, t, f0, moved, p_grid);
    if (report.applicable && !report.convex()) {
      out.found = true;
      out.trials_used = trial + 1;
      out.f0 = f0;
      out.f1 = moved;
      out.report = std::move(report);
      return out;
    }
  }
  out.trials_used = max_trials;
  return out;
}

}  // namespace scorelab
