#include "scorelab/simstudy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"
#include "scorelab/optimal.hpp"
#include "scorelab/random.hpp"

namespace scorelab {

namespace {

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  const double n = static_cast<double>(values.size());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

}  // namespace

void GarchParams::validate() const {
  require(alpha >= 0.0 && beta >= 0.0 && omega >= 0.0, ErrorCode::InvalidArgument,
          "GARCH coefficients must be nonnegative");
  require(alpha + beta < 1.0, ErrorCode::InvalidArgument, "GARCH requires alpha + beta < 1");
  require(init_sigma2 > 0.0 && std::isfinite(init_sigma2), ErrorCode::InvalidArgument,
          "initial variance must be positive");
}

double garch_step(const GarchParams& params, double z_prev, double sigma2_prev) {
  return params.alpha * z_prev * z_prev + params.beta * sigma2_prev + params.omega;
}

ForecastPath simulate_garch(const GarchParams& params, std::size_t n, std::uint64_t seed, std::size_t burn_in) {
  params.validate();
  require(n >= 1, ErrorCode::InvalidArgument, "path length must be at least 1");
  ForecastPath path;
  path.seed = seed;
  path.sigma2.reserve(n);
  path.z.reserve(n);
  path.y.reserve(n);
  double sigma2 = params.init_sigma2;
  for (std::size_t t = 0; t < burn_in + n; ++t) {
    const double z = std::sqrt(sigma2) * counter_normal(seed, t);
    if (t >= burn_in) {
      path.sigma2.push_back(sigma2);
      path.z.push_back(z);
      path.y.push_back(z * z);
    }
    sigma2 = garch_step(params, z, sigma2);
  }
  return path;
}

std::string to_string(ForecasterKind kind) {
  switch (kind) {
    case ForecasterKind::Statistician: return "statistician";
    case ForecasterKind::Optimist: return "optimist";
    case ForecasterKind::Pessimist: return "pessimist";
    case ForecasterKind::Bayes: return "bayes";
  }
  return "unknown";
}

ForecasterKind parse_forecaster(const std::string& name) {
  for (auto k : {ForecasterKind::Statistician, ForecasterKind::Optimist, ForecasterKind::Pessimist,
                 ForecasterKind::Bayes}) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorCode::InvalidArgument, "unknown forecaster '" + name + "'");
}

BayesRule bayes_rule_for(const ScoringFunction& s, double epsilon) {
  require(epsilon > 0.0 && std::isfinite(epsilon), ErrorCode::InvalidArgument, "epsilon must be positive");
  BayesRule rule;
  rule.epsilon = epsilon;
  const Distribution unit = Distribution::scaled_chisq1(1.0);
  if (const auto beta = s.observation_power(); beta && !unit.power_moment_finite(*beta)) {
    rule.epsilon_rule = true;
    return rule;
  }
  const double base = bayes_rule_closed(unit, s).representative;
  const double doubled = bayes_rule_closed(Distribution::scaled_chisq1(2.0), s).representative;
  if (!(std::abs(doubled - 2.0 * base) <= 1e-9 * std::max(1.0, std::abs(base))))
    fail(ErrorCode::Unsupported, "Bayes rule of " + s.label() + " is not proportional to the variance");
  rule.multiplier = base;
  return rule;
}

double bayes_daily_forecast(const ScoringFunction& s, double sigma2, double epsilon) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, double>, BayesRule> cache;
  const auto key = std::make_pair(s.label(), epsilon);
  BayesRule rule;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, bayes_rule_for(s, epsilon)).first;
    rule = it->second;
  }
  return rule.forecast(sigma2);
}

double forecast_value(ForecasterKind kind, const BayesRule& bayes, double sigma2) {
  switch (kind) {
    case ForecasterKind::Statistician: return sigma2;
    case ForecasterKind::Optimist: return 5.0;
    case ForecasterKind::Pessimist: return 0.05;
    case ForecasterKind::Bayes: return bayes.forecast(sigma2);
  }
  return sigma2;
}

std::vector<ScoringFunction> default_study_scores() {
  return {ScoringFunction::se(), ScoringFunction::ae(), ScoringFunction::ape(), ScoringFunction::re()};
}

const CellResult& EvaluationReport::cell(const std::string& score, const std::string& forecaster) const {
  for (const auto& c : cells) {
    if (c.score == score && c.forecaster == forecaster) return c;
  }
  fail(ErrorCode::InvalidArgument, "no cell for score " + score + " and forecaster " + forecaster);
}

EvaluationReport evaluate_path(const ForecastPath& path, const StudyConfig& config) {
  require(path.size() >= 1, ErrorCode::InvalidArgument, "empty forecast path");
  require(path.sigma2.size() == path.size(), ErrorCode::InvalidArgument, "path columns differ in length");
  const auto scores = config.scores.empty() ? default_study_scores() : config.scores;
  EvaluationReport report;
  report.n = path.size();
  report.seed = path.seed;
  report.epsilon = config.epsilon;
  for (auto f : config.forecasters) report.forecasters.push_back(to_string(f));

  bool has_ape = false;
  std::vector<double> values;
  values.reserve(path.size());
  for (const auto& s : scores) {
    report.scores.push_back(s.label());
    if (std::holds_alternative<ScoringFunction::APE>(s.variant())) has_ape = true;
    const BayesRule bayes = bayes_rule_for(s, config.epsilon);
    std::vector<std::pair<double, std::string>> order;
    for (auto f : config.forecasters) {
      values.clear();
      std::size_t skipped = 0;
      for (std::size_t t = 0; t < path.size(); ++t) {
        const double x = forecast_value(f, bayes, path.sigma2[t]);
        try {
          values.push_back(s(x, path.y[t]));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DomainError) throw;
          ++skipped;
        }
      }
      const Moments m = moments(values);
      report.cells.push_back({s.label(), to_string(f), m.mean, m.std_error, values.size(), skipped});
      order.emplace_back(m.mean, to_string(f));
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> ranking;
    for (const auto& [mean, name] : order) ranking.push_back(name);
    report.rankings.push_back(std::move(ranking));
  }
  if (has_ape) {
    report.notes.push_back(
        "ape: E[1/Y] is infinite under this process, so the APE mean score has no population value and its "
        "level depends on the realized path; only the ordering is meaningful");
  }
  for (const auto& c : report.cells) {
    if (c.skipped > 0) {
      report.notes.push_back(c.score + "/" + c.forecaster + ": skipped " + std::to_string(c.skipped) +
                             " observations outside the score domain");
    }
  }
  return report;
}

EvaluationReport run_study(const StudyConfig& config) {
  return evaluate_path(simulate_garch(config.params, config.n, config.seed), config);
}

std::vector<double> b_grid(double from, double to, std::size_t steps) {
  require(steps >= 1, ErrorCode::InvalidArgument, "b grid needs at least one point");
  require(std::isfinite(from) && std::isfinite(to), ErrorCode::InvalidArgument, "b grid bounds must be finite");
  std::vector<double> out;
  for (std::size_t i = 0; i < steps; ++i) {
    out.push_back(steps == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1));
  }
  return out;
}

std::vector<CurveRow> score_curve(CurveFamily family, const std::vector<double>& bs, std::size_t n,
                                  std::uint64_t seed, const GarchParams& params) {
  const ForecastPath path = simulate_garch(params, n, seed);
  std::vector<ForecasterKind> kinds{ForecasterKind::Bayes, ForecasterKind::Optimist, ForecasterKind::Pessimist};
  if (family == CurveFamily::GPLPower) kinds.insert(kinds.begin() + 1, ForecasterKind::Statistician);

  std::vector<CurveRow> rows;
  std::vector<double> bayes_scores(path.size());
  std::vector<double> values(path.size());
  std::vector<double> diffs(path.size());
  for (double b : bs) {
    const ScoringFunction s =
        family == CurveFamily::Patton ? ScoringFunction::patton(b) : ScoringFunction::gpl_power(0.5, b);
    const BayesRule bayes = bayes_rule_for(s);
    for (auto kind : kinds) {
      for (std::size_t t = 0; t < path.size(); ++t) values[t] = s(forecast_value(kind, bayes, path.sigma2[t]), path.y[t]);
      if (kind == ForecasterKind::Bayes) bayes_scores = values;
      for (std::size_t t = 0; t < path.size(); ++t) diffs[t] = values[t] - bayes_scores[t];
      const Moments m = moments(values);
      const Moments d = moments(diffs);
      rows.push_back({b, to_string(kind), m.mean, m.std_error, path.size(), seed, d.mean, d.std_error});
    }
  }
  return rows;
}

}  // namespace scorelab
