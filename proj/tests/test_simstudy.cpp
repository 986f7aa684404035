#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "scorelab/error.hpp"
#include "scorelab/serialization.hpp"
#include "scorelab/simstudy.hpp"

using namespace scorelab;

TEST(Garch, SingleStep) { EXPECT_DOUBLE_EQ(garch_step(GarchParams{}, 0.0, 1.0), 0.8); }

TEST(Garch, ValidationRejectsExplosiveParameters) {
  GarchParams p;
  p.alpha = 0.5;
  p.beta = 0.6;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_THROW(simulate_garch(p, 10, 1), Error);
}

TEST(Garch, LongRunMeanOfVariance) {
  const auto path = simulate_garch(GarchParams{}, 1000000, 1);
  double sum = 0.0;
  for (double s : path.sigma2) sum += s;
  EXPECT_NEAR(sum / static_cast<double>(path.size()), 0.05 / (1.0 - 0.20 - 0.75), 0.05);
}

TEST(Garch, DeterministicPaths) {
  const auto a = simulate_garch(GarchParams{}, 5000, 17);
  const auto b = simulate_garch(GarchParams{}, 5000, 17);
  const auto c = simulate_garch(GarchParams{}, 5000, 18);
  EXPECT_EQ(a.sigma2, b.sigma2);
  EXPECT_EQ(a.y, b.y);
  EXPECT_NE(a.y, c.y);
  for (std::size_t t = 0; t < a.size(); ++t) EXPECT_EQ(a.y[t], a.z[t] * a.z[t]);
}

TEST(BayesRules, ChiSquareMultipliers) {
  EXPECT_DOUBLE_EQ(bayes_daily_forecast(ScoringFunction::se(), 2.0), 2.0);
  EXPECT_NEAR(bayes_daily_forecast(ScoringFunction::ae(), 2.0), 0.910, 4e-3);
  EXPECT_NEAR(bayes_daily_forecast(ScoringFunction::re(), 1.0), 2.366, 2e-3);
  EXPECT_NEAR(bayes_rule_for(ScoringFunction::ae()).multiplier, oracle::chisq_median(1.0), 1e-4);
  EXPECT_NEAR(bayes_rule_for(ScoringFunction::re()).multiplier, oracle::chisq_median(3.0), 2e-3);
  const auto ape = bayes_rule_for(ScoringFunction::ape(), 1e-10);
  EXPECT_TRUE(ape.epsilon_rule);
  EXPECT_EQ(ape.forecast(3.0), 1e-10);
}

TEST(Forecasters, NamesAndValues) {
  EXPECT_EQ(parse_forecaster("pessimist"), ForecasterKind::Pessimist);
  EXPECT_EQ(to_string(ForecasterKind::Bayes), "bayes");
  EXPECT_THROW(parse_forecaster("oracle"), Error);
  const BayesRule rule{false, 0.5, 1e-10};
  EXPECT_EQ(forecast_value(ForecasterKind::Statistician, rule, 3.0), 3.0);
  EXPECT_EQ(forecast_value(ForecasterKind::Optimist, rule, 3.0), 5.0);
  EXPECT_EQ(forecast_value(ForecasterKind::Pessimist, rule, 3.0), 0.05);
  EXPECT_EQ(forecast_value(ForecasterKind::Bayes, rule, 3.0), 1.5);
}

TEST(Evaluation, DiagonalPathScoresZero) {
  ForecastPath path;
  path.sigma2.assign(100, 1.0);
  path.z.assign(100, std::sqrt(5.0));
  path.y.assign(100, 5.0);
  StudyConfig config;
  config.scores = {ScoringFunction::se(), ScoringFunction::ae()};
  const auto report = evaluate_path(path, config);
  EXPECT_EQ(report.cell("se", "optimist").mean, 0.0);
  EXPECT_EQ(report.cell("ae", "optimist").mean, 0.0);
  EXPECT_EQ(report.rankings[0].front(), "optimist");
}

TEST(Evaluation, SkipsUndefinedObservations) {
  ForecastPath path;
  path.sigma2 = {1.0, 1.0};
  path.z = {0.0, 1.0};
  path.y = {0.0, 1.0};
  StudyConfig config;
  config.scores = {ScoringFunction::ape()};
  const auto report = evaluate_path(path, config);
  EXPECT_EQ(report.cell("ape", "statistician").skipped, 1u);
  EXPECT_EQ(report.cell("ape", "statistician").n, 1u);
  EXPECT_EQ(report.cell("ape", "statistician").mean, 0.0);
}

TEST(Evaluation, BayesIsBestWithinMonteCarloError) {
  StudyConfig config;
  config.seed = 5;
  config.scores = {ScoringFunction::ae(), ScoringFunction::re()};
  const auto report = run_study(config);
  for (const std::string score : {"ae", "re"}) {
    const auto& bayes = report.cell(score, "bayes");
    for (const std::string other : {"statistician", "optimist", "pessimist"}) {
      const auto& c = report.cell(score, other);
      EXPECT_LE(bayes.mean, c.mean + 3.0 * std::hypot(bayes.std_error, c.std_error)) << score << " " << other;
    }
  }
}

TEST(Evaluation, StandardErrorsShrinkAtRootN) {
  StudyConfig config;
  config.seed = 9;
  config.scores = {ScoringFunction::ae(), ScoringFunction::re()};
  std::vector<EvaluationReport> reports;
  for (std::size_t n : {1000, 10000, 100000}) {
    config.n = n;
    reports.push_back(run_study(config));
  }
  for (const std::string score : {"ae", "re"}) {
    for (const std::string f : {"statistician", "bayes"}) {
      for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
        const double ratio = reports[i].cell(score, f).std_error / reports[i + 1].cell(score, f).std_error;
        EXPECT_GT(ratio, std::sqrt(10.0) / 1.5) << score << " " << f << " step " << i;
        EXPECT_LT(ratio, std::sqrt(10.0) * 1.5) << score << " " << f << " step " << i;
      }
    }
  }
}

TEST(Evaluation, ReportsAreByteIdentical) {
  StudyConfig config;
  config.n = 20000;
  config.seed = 4;
  const auto a = io::to_json(run_study(config)).dump();
  const auto b = io::to_json(run_study(config)).dump();
  EXPECT_EQ(a, b);
}

TEST(Evaluation, ApeNoteIsPresent) {
  StudyConfig config;
  config.n = 2000;
  const auto report = run_study(config);
  bool found = false;
  for (const auto& note : report.notes) found = found || note.find("ape") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Curves, GridAndRows) {
  const auto grid = b_grid(-1.0, 3.0, 17);
  ASSERT_EQ(grid.size(), 17u);
  EXPECT_DOUBLE_EQ(grid[4], 0.0);
  EXPECT_DOUBLE_EQ(grid.back(), 3.0);
  const auto rows = score_curve(CurveFamily::GPLPower, {0.0, 1.0}, 5000, 2);
  EXPECT_EQ(rows.size(), 8u);
  for (const auto& r : rows) {
    if (r.forecaster == "bayes") {
      EXPECT_EQ(r.diff_mean, 0.0);
    } else {
      EXPECT_GT(r.diff_mean, 0.0) << r.b << " " << r.forecaster;
    }
  }
}
