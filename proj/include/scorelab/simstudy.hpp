#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scorelab/scoring.hpp"

namespace scorelab {

struct GarchParams {
  double alpha = 0.20;
  double beta = 0.75;
  double omega = 0.05;
  double init_sigma2 = 1.0;

  /// Throws InvalidArgument unless alpha, beta, omega >= 0 and alpha + beta < 1.
  void validate() const;
};

/// sigma_t^2 = alpha z_{t-1}^2 + beta sigma_{t-1}^2 + omega.
double garch_step(const GarchParams& params, double z_prev, double sigma2_prev);

struct ForecastPath {
  std::vector<double> sigma2;
  std::vector<double> z;
  std::vector<double> y;
  std::uint64_t seed = 0;

  std::size_t size() const { return y.size(); }
};

constexpr std::size_t kBurnIn = 1000;

/// Normal variates come from counter_normal(seed, t) with t counting the
/// burn-in steps, so a path is a pure function of (params, n, seed).
ForecastPath simulate_garch(const GarchParams& params, std::size_t n, std::uint64_t seed,
                            std::size_t burn_in = kBurnIn);

enum class ForecasterKind { Statistician, Optimist, Pessimist, Bayes };

std::string to_string(ForecasterKind kind);
/// Accepts "statistician", "optimist", "pessimist" and "bayes".
ForecasterKind parse_forecaster(const std::string& name);

/// Bayes rule under a scaled chi-square(1) predictive law: either a multiple
/// of sigma_t^2 or, when the expected score is infinite for every forecast,
/// the constant epsilon.
struct BayesRule {
  bool epsilon_rule = false;
  double multiplier = 1.0;
  double epsilon = 1e-10;

  double forecast(double sigma2) const { return epsilon_rule ? epsilon : multiplier * sigma2; }
};

/// Derives the rule once from ScaledChiSq1(1). Throws Unsupported when the
/// closed-form rule is not scale equivariant.
BayesRule bayes_rule_for(const ScoringFunction& s, double epsilon = 1e-10);

/// Same as bayes_rule_for(s, epsilon).forecast(sigma2), with the rule cached per score.
double bayes_daily_forecast(const ScoringFunction& s, double sigma2, double epsilon = 1e-10);

double forecast_value(ForecasterKind kind, const BayesRule& bayes, double sigma2);

struct StudyConfig {
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  std::vector<ScoringFunction> scores;
  std::vector<ForecasterKind> forecasters{ForecasterKind::Statistician, ForecasterKind::Optimist,
                                          ForecasterKind::Pessimist, ForecasterKind::Bayes};
  double epsilon = 1e-10;
  GarchParams params;
};

/// SE, AE, APE and RE in table order.
std::vector<ScoringFunction> default_study_scores();

struct CellResult {
  std::string score;
  std::string forecaster;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  /// Observations skipped because the score is undefined there (y underflow to 0).
  std::size_t skipped = 0;
};

struct EvaluationReport {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double epsilon = 1e-10;
  std::vector<std::string> scores;
  std::vector<std::string> forecasters;
  /// Score-major order: cells[i * forecasters.size() + j].
  std::vector<CellResult> cells;
  /// Per score, forecaster names from best to worst mean score.
  std::vector<std::vector<std::string>> rankings;
  std::vector<std::string> notes;

  const CellResult& cell(const std::string& score, const std::string& forecaster) const;
};

EvaluationReport evaluate_path(const ForecastPath& path, const StudyConfig& config);
EvaluationReport run_study(const StudyConfig& config);

enum class CurveFamily { Patton, GPLPower };

struct CurveRow {
  double b = 0.0;
  std::string forecaster;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  /// Mean and standard error of this forecaster's score minus the Bayes score.
  double diff_mean = 0.0;
  double diff_stderr = 0.0;
};

/// Evenly spaced grid with `steps` points from `from` to `to`.
std::vector<double> b_grid(double from, double to, std::size_t steps);

/// Mean scores across b on one simulated path. Patton uses Bayes, optimist and
/// pessimist; the GPL power family (alpha = 1/2) adds the statistician.
std::vector<CurveRow> score_curve(CurveFamily family, const std::vector<double>& bs, std::size_t n,
                                  std::uint64_t seed, const GarchParams& params = {});

}  // namespace scorelab
