#include "scorelab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"
#include "scorelab/numerics.hpp"

namespace scorelab {

namespace {

constexpr double kQuantileTolerance = 1e-12;

void check_probability(double p, const char* what) {
  require(std::isfinite(p) && p >= 0.0, ErrorCode::InvalidArgument,
          std::string(what) + " must be finite and nonnegative");
}

// Quantile of the parametric law given u and v = 1 - u, both computed
// directly so that neither tail loses precision.
double parametric_quantile(const ParametricSpec& spec, double u, double v) {
  switch (spec.family) {
    case ParametricFamily::StandardNormal:
      return u <= 0.5 ? numerics::normal_quantile(u) : -numerics::normal_quantile(v);
    case ParametricFamily::StudentT: {
      const double t = u <= 0.5 ? numerics::student_t_quantile(spec.nu, u)
                                : -numerics::student_t_quantile(spec.nu, v);
      return t * std::sqrt((spec.nu - 2.0) / spec.nu);
    }
    case ParametricFamily::ScaledChiSq1: {
      const double z = numerics::normal_upper_quantile(0.5 * v);
      return spec.scale * z * z;
    }
  }
  return std::nan("");
}

}  // namespace

Distribution Distribution::from_atoms(std::vector<double> points, std::vector<double> weights, Kind kind) {
  require(points.size() == weights.size(), ErrorCode::InvalidArgument, "points and weights differ in length");
  std::vector<std::size_t> order;
  order.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(std::isfinite(points[i]), ErrorCode::InvalidArgument, "atom location must be finite");
    check_probability(weights[i], "atom weight");
    if (weights[i] > 0.0) order.push_back(i);
  }
  require(!order.empty(), ErrorCode::InvalidArgument, "distribution has no positive mass");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

  Distribution d;
  d.kind_ = kind;
  for (std::size_t idx : order) {
    if (!d.points_.empty() && points[idx] - d.points_.back() < kMergeDistance) {
      d.weights_.back() += weights[idx];
    } else {
      d.points_.push_back(points[idx]);
      d.weights_.push_back(weights[idx]);
    }
  }
  const double total = std::accumulate(d.weights_.begin(), d.weights_.end(), 0.0);
  require(std::isfinite(total) && total > 0.0, ErrorCode::InvalidArgument, "total mass must be finite and positive");
  d.cumulative_.resize(d.weights_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < d.weights_.size(); ++i) {
    d.weights_[i] /= total;
    running += d.weights_[i];
    d.cumulative_[i] = running;
  }
  d.cumulative_.back() = 1.0;
  return d;
}

Distribution Distribution::atoms(std::span<const Atom> atoms) {
  std::vector<double> points, weights;
  for (const Atom& a : atoms) {
    points.push_back(a.point);
    weights.push_back(a.weight);
  }
  return from_atoms(std::move(points), std::move(weights), Kind::Atoms);
}

Distribution Distribution::atoms(std::span<const double> points, std::span<const double> weights) {
  return from_atoms({points.begin(), points.end()}, {weights.begin(), weights.end()}, Kind::Atoms);
}

Distribution Distribution::point_mass(double point) {
  const double p[] = {point};
  const double w[] = {1.0};
  return atoms(p, w);
}

Distribution Distribution::sample(std::span<const double> draws) {
  require(!draws.empty(), ErrorCode::InvalidArgument, "empty sample");
  Distribution d = from_atoms({draws.begin(), draws.end()}, std::vector<double>(draws.size(), 1.0), Kind::Sample);
  d.draws_.assign(draws.begin(), draws.end());
  return d;
}

Distribution Distribution::grid(double lo, double hi, std::span<const double> density) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, ErrorCode::InvalidArgument, "grid needs lo < hi");
  require(density.size() >= 2, ErrorCode::InvalidArgument, "grid needs at least two density values");
  const std::size_t m = density.size();
  const double h = (hi - lo) / static_cast<double>(m - 1);
  std::vector<double> points(m), weights(m);
  for (std::size_t i = 0; i < m; ++i) {
    check_probability(density[i], "grid density");
    points[i] = i + 1 == m ? hi : lo + h * static_cast<double>(i);
    weights[i] = density[i] * h * ((i == 0 || i + 1 == m) ? 0.5 : 1.0);
  }
  Distribution d = from_atoms(std::move(points), std::move(weights), Kind::Grid);
  d.grid_lo_ = lo;
  d.grid_hi_ = hi;
  d.grid_density_.assign(density.begin(), density.end());
  return d;
}

Distribution Distribution::parametric(const ParametricSpec& spec, std::size_t resolution) {
  require(resolution >= 2, ErrorCode::InvalidArgument, "parametric resolution must be at least 2");
  switch (spec.family) {
    case ParametricFamily::StandardNormal: break;
    case ParametricFamily::StudentT:
      require(std::isfinite(spec.nu) && spec.nu > 2.0, ErrorCode::InvalidArgument, "Student t requires nu > 2");
      break;
    case ParametricFamily::ScaledChiSq1:
      require(std::isfinite(spec.scale) && spec.scale > 0.0, ErrorCode::InvalidArgument,
              "scaled chi-square requires scale > 0");
      break;
  }
  const bool lower_tail = spec.family != ParametricFamily::ScaledChiSq1;
  const double u_lo = lower_tail ? kTailMass : 0.0;
  const double v_hi = kTailMass;  // 1 - u_hi
  const double span = 1.0 - u_lo - v_hi;
  const double cell = span / static_cast<double>(resolution);
  // Two-point Gauss-Legendre average of the quantile function over each cell.
  const double offset = 0.5 / std::sqrt(3.0);

  std::vector<double> points(resolution), weights(resolution, cell);
  for (std::size_t i = 0; i < resolution; ++i) {
    double sum = 0.0;
    for (double node : {0.5 - offset, 0.5 + offset}) {
      const double t = static_cast<double>(i) + node;
      const double u = u_lo + t * cell;
      const double v = v_hi + (static_cast<double>(resolution) - t) * cell;
      sum += parametric_quantile(spec, u, v);
    }
    points[i] = 0.5 * sum;
  }
  Distribution d = from_atoms(std::move(points), std::move(weights), Kind::Parametric);
  d.parametric_ = spec;
  const double lo = lower_tail ? parametric_quantile(spec, u_lo, 1.0 - u_lo) : 0.0;
  const double hi = parametric_quantile(spec, 1.0 - v_hi, v_hi);
  d.truncation_ = Interval::closed(lo, hi);
  return d;
}

Distribution Distribution::standard_normal(std::size_t resolution) {
  return parametric({ParametricFamily::StandardNormal, 0.0, 1.0}, resolution);
}

Distribution Distribution::student_t(double nu, std::size_t resolution) {
  return parametric({ParametricFamily::StudentT, nu, 1.0}, resolution);
}

Distribution Distribution::scaled_chisq1(double scale, std::size_t resolution) {
  return parametric({ParametricFamily::ScaledChiSq1, 0.0, scale}, resolution);
}

Distribution Distribution::mixture(const Distribution& first, const Distribution& second, double p) {
  require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument, "mixture weight must lie in [0, 1]");
  std::vector<double> points, weights;
  for (std::size_t i = 0; i < first.size(); ++i) {
    points.push_back(first.points_[i]);
    weights.push_back((1.0 - p) * first.weights_[i]);
  }
  for (std::size_t i = 0; i < second.size(); ++i) {
    points.push_back(second.points_[i]);
    weights.push_back(p * second.weights_[i]);
  }
  return from_atoms(std::move(points), std::move(weights), Kind::Atoms);
}

std::optional<double> Distribution::analytic_mean() const {
  if (!parametric_) return std::nullopt;
  switch (parametric_->family) {
    case ParametricFamily::StandardNormal:
    case ParametricFamily::StudentT:
      return 0.0;
    case ParametricFamily::ScaledChiSq1:
      return parametric_->scale;
  }
  return std::nullopt;
}

bool Distribution::power_moment_finite(double p) const {
  if (parametric_) {
    switch (parametric_->family) {
      case ParametricFamily::StandardNormal: return p > -1.0;
      case ParametricFamily::StudentT: return p > -1.0 && p < parametric_->nu;
      case ParametricFamily::ScaledChiSq1: return p > -0.5;
    }
  }
  if (p < 0.0) return std::none_of(points_.begin(), points_.end(), [](double y) { return y == 0.0; });
  return true;
}

Distribution Distribution::transformed(const std::function<double(double)>& g) const {
  std::vector<double> points(points_.size());
  std::transform(points_.begin(), points_.end(), points.begin(), g);
  for (double y : points) require(std::isfinite(y), ErrorCode::NonFinite, "transformed atom is not finite");
  return from_atoms(std::move(points), weights_, Kind::Atoms);
}

Distribution Distribution::scaled(double c) const {
  return transformed([c](double y) { return c * y; });
}

namespace measures {

double expectation(const Distribution& dist, const std::function<double(double)>& f) {
  const auto points = dist.points();
  const auto weights = dist.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double v = f(points[i]);
    if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "integrand not finite at y=" + format_number(points[i]));
    sum += weights[i] * v;
  }
  return sum;
}

double cdf(const Distribution& dist, double x) {
  const auto points = dist.points();
  const auto idx = static_cast<std::size_t>(std::upper_bound(points.begin(), points.end(), x) - points.begin());
  return idx == 0 ? 0.0 : dist.cumulative()[idx - 1];
}

double cdf_left(const Distribution& dist, double x) {
  const auto points = dist.points();
  const auto idx = static_cast<std::size_t>(std::lower_bound(points.begin(), points.end(), x) - points.begin());
  return idx == 0 ? 0.0 : dist.cumulative()[idx - 1];
}

Interval quantile_set(const Distribution& dist, double beta) {
  require(beta > 0.0 && beta < 1.0, ErrorCode::InvalidArgument, "quantile level must lie in (0, 1)");
  const auto cum = dist.cumulative();
  const auto it = std::lower_bound(cum.begin(), cum.end(), beta - kQuantileTolerance);
  const auto i = static_cast<std::size_t>(it - cum.begin());
  const double lo = dist.points()[i];
  double hi = lo;
  if (cum[i] <= beta + kQuantileTolerance && i + 1 < dist.size()) hi = dist.points()[i + 1];
  return Interval::closed(lo, hi);
}

double quantile(const Distribution& dist, double beta) { return quantile_set(dist, beta).lo; }

Distribution reweight(const Distribution& dist, const WeightFn& w) {
  if (const auto p = w.power_exponent(); p && !dist.power_moment_finite(*p)) {
    fail(ErrorCode::DegenerateWeight, "E_F[w(Y)] is infinite for weight " + w.label());
  }
  const auto points = dist.points();
  std::vector<double> weights(points.size());
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double wi = w(points[i]);
    if (!std::isfinite(wi)) {
      fail(ErrorCode::DegenerateWeight, "weight " + w.label() + " not finite at y=" + format_number(points[i]));
    }
    weights[i] = dist.weights()[i] * wi;
    total += weights[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    fail(ErrorCode::DegenerateWeight, "E_F[w(Y)] is zero or not finite for weight " + w.label());
  }
  if (dist.kind() == Distribution::Kind::Grid) {
    std::vector<double> density(dist.grid_density().begin(), dist.grid_density().end());
    const double h = (dist.grid_hi() - dist.grid_lo()) / static_cast<double>(density.size() - 1);
    for (std::size_t i = 0; i < density.size(); ++i) {
      const double y = i + 1 == density.size() ? dist.grid_hi() : dist.grid_lo() + h * static_cast<double>(i);
      if (density[i] > 0.0) density[i] *= w(y);
    }
    return Distribution::grid(dist.grid_lo(), dist.grid_hi(), density);
  }
  return Distribution::atoms(points, weights);
}

}  // namespace measures
}  // namespace scorelab
