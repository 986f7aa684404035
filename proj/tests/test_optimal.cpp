#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "scorelab/error.hpp"
#include "scorelab/lab.hpp"
#include "scorelab/optimal.hpp"
#include "scorelab/random.hpp"

using namespace scorelab;

namespace {

Distribution atoms(std::vector<double> p, std::vector<double> w) { return Distribution::atoms(p, w); }

}  // namespace

TEST(Numeric, TwoPointExamples) {
  const auto two = atoms({0, 1}, {0.5, 0.5});
  EXPECT_NEAR(bayes_rule_numeric(two, ScoringFunction::se()).representative, 0.5, 1e-9);
  const auto pin = bayes_rule_numeric(two, ScoringFunction::pinball(0.9));
  EXPECT_NEAR(pin.representative, 1.0, 1e-9);
  const double brute = oracle::grid_argmin(
      [&](double x) { return expected_score(ScoringFunction::pinball(0.9), x, two); }, -1, 2, 30001);
  EXPECT_NEAR(brute, 1.0, 1e-4);
  EXPECT_EQ(pin.outcome, BayesSolution::Outcome::Minimum);
}

TEST(Numeric, ChiSquareMedians) {
  const auto chi = Distribution::scaled_chisq1(1.0, 4001);
  EXPECT_NEAR(bayes_rule_numeric(chi, ScoringFunction::ae()).representative, 0.455, 2e-3);
  EXPECT_NEAR(bayes_rule_numeric(chi, ScoringFunction::re()).representative, 2.366, 2e-3);
}

TEST(Numeric, ApeOnChiSquareIsMonotone) {
  const auto chi = Distribution::scaled_chisq1(1.0, 2001);
  const auto sol = bayes_rule_numeric(chi, ScoringFunction::ape());
  EXPECT_EQ(sol.outcome, BayesSolution::Outcome::MonotoneToLower);
  EXPECT_TRUE(std::isinf(sol.expected_score));
}

TEST(Numeric, FlatMinimumReportsInterval) {
  const auto sol = bayes_rule_numeric(atoms({1, 3}, {0.5, 0.5}), ScoringFunction::ae());
  EXPECT_NEAR(sol.lo, 1.0, 1e-6);
  EXPECT_NEAR(sol.hi, 3.0, 1e-6);
  EXPECT_NEAR(sol.representative, 2.0, 1e-6);
}

TEST(Numeric, CancellationIsHonoured) {
  std::atomic<bool> stop{true};
  BayesOptions options;
  options.cancel = &stop;
  try {
    bayes_rule_numeric(atoms({1, 3}, {0.5, 0.5}), ScoringFunction::se(), std::nullopt, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Cancelled);
  }
}

TEST(Closed, RoutesThroughMetadata) {
  const auto d = atoms({1, 3}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(bayes_rule_closed(d, ScoringFunction::se()).representative, 2.0);
  EXPECT_DOUBLE_EQ(bayes_rule_closed(d, ScoringFunction::squared_relative_error()).representative, 2.5);
  EXPECT_EQ(bayes_rule_closed(atoms({0, 1}, {0.6, 0.4}), ScoringFunction::zero_one(0.1)).representative, 0.0);
  const auto custom =
      ScoringFunction::custom("c", [](double x, double y) { return (x - y) * (x - y); }, Interval::real_line(),
                              Interval::real_line());
  try {
    bayes_rule_closed(d, custom);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoClosedForm);
  }
}

TEST(Root, IdentificationRoot) {
  std::mt19937_64 rng(1);
  const AtomGenerator gen{0.2, 6.0};
  for (int i = 0; i < 30; ++i) {
    const auto d = gen(rng);
    EXPECT_NEAR(bayes_rule_root(d, ScoringFunction::se()).representative, functionals::mean(d).representative, 1e-9);
    EXPECT_NEAR(bayes_rule_root(d, ScoringFunction::asym_quadratic(0.3)).representative,
                functionals::expectile(d, 0.3).representative, 1e-9);
  }
  EXPECT_THROW(bayes_rule_root(atoms({1, 3}, {0.5, 0.5}), ScoringFunction::ae()), Error);
}

TEST(WeightedFunctional, Examples) {
  const auto d = atoms({1, 3}, {0.5, 0.5});
  const auto w = weighted_functional(Functional::mean(), WeightFn(NamedFn::reciprocal_square()));
  EXPECT_NEAR(functionals::evaluate(w, d).representative, 1.2, 1e-15);
  const auto same = weighted_functional(Functional::mean(), WeightFn::unit());
  EXPECT_DOUBLE_EQ(functionals::evaluate(same, d).representative, 2.0);
  const auto re = weighted_functional(Functional::median(), WeightFn::power(1.0));
  EXPECT_NEAR(functionals::evaluate(re, Distribution::scaled_chisq1(1.0)).representative, 2.366, 2e-3);
}

TEST(Duality, NumericAgreesWithClosedForm) {
  const std::vector<ScoringFunction> scores{
      ScoringFunction::se(),          ScoringFunction::ae(),
      ScoringFunction::re(),          ScoringFunction::ape(),
      ScoringFunction::patton(0.0),   ScoringFunction::pinball(0.3),
      ScoringFunction::gpl(0.7, MonotoneSpec::log()),
      ScoringFunction::asym_quadratic(0.8),
      ScoringFunction::squared_relative_error()};
  const AtomGenerator gen{0.1, 10.0};
  for (const auto& s : scores) {
    for (std::uint64_t trial = 0; trial < 25; ++trial) {
      auto rng = trial_stream(42, trial);
      const auto d = gen(rng);
      const auto numeric = bayes_rule_numeric(d, s);
      const auto closed = bayes_rule_closed(d, s);
      const bool close = std::abs(numeric.representative - closed.representative) <= 1e-6;
      const bool inside = closed.representative >= numeric.lo - 1e-9 && closed.representative <= numeric.hi + 1e-9;
      EXPECT_TRUE(close || inside) << s.label() << " on " << describe(d) << ": " << numeric.representative << " vs "
                                   << closed.representative;
    }
  }
}

TEST(StrictConsistency, GapAwayFromOptimum) {
  const AtomGenerator gen{-3.0, 3.0};
  const std::vector<ScoringFunction> scores{ScoringFunction::se(),
                                            ScoringFunction::bregman(ConvexSpec::bounded_rational())};
  for (const auto& s : scores) {
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      auto rng = trial_stream(5, trial);
      const auto d = gen(rng);
      const double opt = functionals::mean(d).representative;
      const double best = expected_score(s, opt, d);
      for (double delta : {-0.5, -1e-3, 1e-3, 0.5}) EXPECT_GT(expected_score(s, opt + delta, d) - best, 0.0);
    }
  }
}

TEST(Equivariance, ScaleForHomogeneousScores) {
  const AtomGenerator gen{0.2, 5.0};
  const std::vector<ScoringFunction> scores{ScoringFunction::patton(0.0), ScoringFunction::re(),
                                            ScoringFunction::patton(3.0)};
  for (const auto& s : scores) {
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
      auto rng = trial_stream(9, trial);
      const auto d = gen(rng);
      const double base = bayes_rule_numeric(d, s).representative;
      for (double c : {0.5, 2.0}) {
        EXPECT_NEAR(bayes_rule_numeric(d.scaled(c), s).representative, c * base, 1e-6 * std::max(1.0, c * base))
            << s.label();
      }
    }
  }
}

TEST(Equivariance, TranslationForSquaredError) {
  const AtomGenerator gen{-2.0, 2.0};
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto rng = trial_stream(10, trial);
    const auto d = gen(rng);
    const double base = bayes_rule_numeric(d, ScoringFunction::se()).representative;
    const auto shifted = d.transformed([](double y) { return y + 3.5; });
    EXPECT_NEAR(bayes_rule_numeric(shifted, ScoringFunction::se()).representative, base + 3.5, 1e-6);
  }
}

TEST(RelativeErrorOptimum, MatchesOracles) {
  EXPECT_NEAR(relative_error_optimum_t(4.0), 2.0 / (std::pow(2.0, 2.0 / 3.0) - 1.0), 1e-6);
  for (double nu : {4.0, 5.0, 6.0, 8.0, 10.0, 30.0, double(INFINITY)}) {
    EXPECT_NEAR(relative_error_optimum_t(nu), oracle::relative_error_optimum(nu), 1e-8) << nu;
  }
  EXPECT_NEAR(relative_error_optimum_t(10.0), 2.5801, 5e-4);
  EXPECT_NEAR(relative_error_optimum_t(INFINITY), 2.3660, 5e-4);
  EXPECT_THROW(relative_error_optimum_t(2.0), Error);
}

TEST(RelativeErrorOptimum, DecreasingAndAboveMonteCarloApproximations) {
  const std::vector<double> nus{4, 6, 8, 10, INFINITY};
  const std::vector<double> approximations{3.0962, 2.7300, 2.6067, 2.5500, 2.3600};
  double prev = INFINITY;
  for (std::size_t i = 0; i < nus.size(); ++i) {
    const double v = relative_error_optimum_t(nus[i]);
    EXPECT_LT(v, prev);
    EXPECT_GT(v, approximations[i]);
    prev = v;
  }
}
