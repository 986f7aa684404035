#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "scorelab/error.hpp"
#include "scorelab/optimal.hpp"
#include "scorelab/scoring.hpp"

using namespace scorelab;

namespace {

Distribution atoms(std::vector<double> p, std::vector<double> w) { return Distribution::atoms(p, w); }

std::vector<ScoringFunction> catalogue() {
  return {ScoringFunction::se(),
          ScoringFunction::ae(),
          ScoringFunction::ape(),
          ScoringFunction::re(),
          ScoringFunction::beta_median(2.0),
          ScoringFunction::bregman(ConvexSpec::square()),
          ScoringFunction::bregman(ConvexSpec::bounded_rational()),
          ScoringFunction::bregman(ConvexSpec::negative_log()),
          ScoringFunction::bregman(ConvexSpec::reciprocal()),
          ScoringFunction::bregman(ConvexSpec::custom_grid(-2, 2, {4, 1, 0, 1, 4})),
          ScoringFunction::power_bregman(3.0),
          ScoringFunction::patton(-0.5),
          ScoringFunction::patton(0.0),
          ScoringFunction::patton(0.5),
          ScoringFunction::patton(1.0),
          ScoringFunction::patton(2.0),
          ScoringFunction::patton(3.0),
          ScoringFunction::pinball(0.1),
          ScoringFunction::gpl(0.7, MonotoneSpec::log()),
          ScoringFunction::gpl(0.3, MonotoneSpec::logistic()),
          ScoringFunction::gpl_power(0.5, -1.0),
          ScoringFunction::gpl_power(0.5, 0.0),
          ScoringFunction::gpl_power(0.5, 2.0),
          ScoringFunction::asym_quadratic(0.8),
          ScoringFunction::expectile_bregman(0.25, ConvexSpec::bounded_rational()),
          ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::square(), NamedFn::identity(),
                                         Interval::positive()),
          ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::reciprocal(), NamedFn::reciprocal_square()),
          ScoringFunction::squared_relative_error(),
          ScoringFunction::obs_weighted_se(),
          ScoringFunction::zero_one(0.5),
          ScoringFunction::survival(2.0)};
}

}  // namespace

TEST(Families, PointValues) {
  EXPECT_EQ(ScoringFunction::se()(2, 1), 1.0);
  EXPECT_DOUBLE_EQ(ScoringFunction::patton(2.0)(1, 3), 2.0);
  for (double x : {0.1, 1.0, 7.0}) EXPECT_NEAR(ScoringFunction::patton(0.0)(x, x), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(ScoringFunction::gpl(0.5, MonotoneSpec::identity())(2, 1), 0.5);
  EXPECT_EQ(ScoringFunction::survival(2.0)(2, 3), 0.0);
  EXPECT_EQ(ScoringFunction::survival(2.0)(2, 5), 1.0);
  EXPECT_EQ(ScoringFunction::zero_one(0.5)(1, 1.4), 0.0);
  EXPECT_EQ(ScoringFunction::zero_one(0.5)(1, 1.6), 1.0);
}

TEST(Families, BetaMedianMinusOneIsApe) {
  const auto b = ScoringFunction::beta_median(-1.0);
  const auto ape = ScoringFunction::ape();
  for (double x : {0.3, 1.0, 4.5})
    for (double y : {0.2, 1.1, 9.0}) {
      EXPECT_NEAR(b(x, y), std::abs((x - y) / y), 1e-14);
      EXPECT_NEAR(ape(x, y), b(x, y), 1e-14);
    }
  const auto re = ScoringFunction::re();
  for (double x : {0.3, 1.0, 4.5})
    for (double y : {0.2, 1.1, 9.0}) EXPECT_NEAR(re(x, y), std::abs((x - y) / x), 1e-14);
}

TEST(Families, PattonMatchesPowerBregmanOnPositiveAxis) {
  const auto patton = ScoringFunction::patton(3.0);
  const auto power = ScoringFunction::power_bregman(3.0);
  const double ratio = patton(1.0, 2.0) / power(1.0, 2.0);
  for (double x : probe_points(Interval::positive(), 12))
    for (double y : probe_points(Interval::positive(), 12)) {
      if (x == y) continue;
      EXPECT_NEAR(patton(x, y) / power(x, y), ratio, 1e-10);
    }
  EXPECT_NEAR(ratio, 1.0 / 6.0, 1e-12);
}

TEST(Families, ExpectileHalfSquareIsHalfSe) {
  const auto e = ScoringFunction::expectile_bregman(0.5, ConvexSpec::square());
  for (double x : probe_points(Interval::real_line(), 15))
    for (double y : probe_points(Interval::real_line(), 15)) EXPECT_NEAR(e(x, y), 0.5 * (x - y) * (x - y), 1e-12);
}

TEST(Families, RatioBregmanMatchesWeightedBregman) {
  const auto s = ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::square(), NamedFn::identity(),
                                                Interval::positive());
  for (double x : {0.5, 2.0})
    for (double y : {0.25, 1.0, 3.0}) EXPECT_NEAR(s(x, y), y * (x - y) * (x - y), 1e-12);
}

TEST(Assumptions, NonnegativeWithZeroDiagonal) {
  for (const auto& s : catalogue()) {
    const auto xs = probe_points(s.forecast_domain(), 50);
    const auto ys = probe_points(s.observation_domain(), 50);
    for (double x : xs)
      for (double y : ys) ASSERT_GE(s(x, y), -1e-12) << s.label() << " at " << x << "," << y;
    for (double y : ys)
      if (s.forecast_domain().contains(y)) {
        ASSERT_LE(std::abs(s(y, y)), 1e-12) << s.label() << " at " << y;
      }
  }
}

TEST(Assumptions, ContinuityAwayFromDiagonal) {
  const std::vector<ScoringFunction> smooth{ScoringFunction::bregman(ConvexSpec::bounded_rational()),
                                            ScoringFunction::patton(0.5),
                                            ScoringFunction::expectile_bregman(0.9, ConvexSpec::square()),
                                            ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::square(),
                                                                           NamedFn::identity(), Interval::positive())};
  for (const auto& s : smooth) {
    for (double x : {0.5, 1.5, 3.0}) {
      const double y = 2.2;
      const double h = 1e-7;
      EXPECT_NEAR(s(x + h, y), s(x, y), 1e-5) << s.label();
      EXPECT_NEAR(s(x - h, y), s(x, y), 1e-5) << s.label();
    }
  }
}

TEST(Assumptions, BregmanIsConvexityGap) {
  const std::vector<ConvexSpec> phis{ConvexSpec::square(), ConvexSpec::bounded_rational(), ConvexSpec::power(1.5)};
  for (const auto& phi : phis) {
    const auto s = ScoringFunction::bregman(phi);
    for (double x : probe_points(phi.domain(), 20))
      for (double y : probe_points(phi.domain(), 20)) {
        const double gap = phi.value(y) - phi.value(x) - phi.derivative(x) * (y - x);
        EXPECT_NEAR(s(x, y), gap, 1e-12 * std::max(1.0, std::abs(phi.value(y))));
        if (x != y) {
          EXPECT_GT(s(x, y), 0.0) << phi.label();
        }
      }
  }
}

TEST(Assumptions, ConstructionRejectsBadScores) {
  EXPECT_THROW(ScoringFunction::pinball(0.0), Error);
  EXPECT_THROW(ScoringFunction::zero_one(-1.0), Error);
  EXPECT_THROW(ScoringFunction::survival(1.0), Error);
  EXPECT_THROW(ConvexSpec::custom_grid(0, 1, {0, 1, 0}), Error);
  EXPECT_THROW(ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::square(), NamedFn::identity()), Error);
}

TEST(Domains, UndefinedRegionsRaise) {
  auto expect_domain_error = [](auto fn) {
    try {
      fn();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
  };
  expect_domain_error([] { ScoringFunction::ape()(1.0, 0.0); });
  expect_domain_error([] { ScoringFunction::re()(0.0, 1.0); });
  expect_domain_error([] { ScoringFunction::patton(0.0)(-1.0, 1.0); });
}

TEST(Weighted, Examples) {
  const auto reciprocal_gap = ScoringFunction::custom(
      "abs-reciprocal", [](double x, double y) { return std::abs(1 / x - 1 / y); }, Interval::positive(),
      Interval::positive());
  const auto re_like = weighted_score(reciprocal_gap, WeightFn::power(1.0));
  const auto spe = weighted_score(ScoringFunction::se(), WeightFn(NamedFn::reciprocal_square()));
  const auto same = weighted_score(ScoringFunction::se(), WeightFn::unit());
  for (double x : {0.5, 1.0, 3.0})
    for (double y : {0.25, 2.0, 5.0}) {
      EXPECT_NEAR(re_like(x, y), std::abs((x - y) / x), 1e-14);
      EXPECT_NEAR(spe(x, y), (x - y) * (x - y) / (y * y), 1e-14);
      EXPECT_EQ(same(x, y), (x - y) * (x - y));
    }
  ASSERT_TRUE(spe.elicits().has_value());
  EXPECT_EQ(spe.elicits()->label(), "weighted(mean; reciprocal-square)");
}

TEST(Revelation, IdentityAndScaledForecasts) {
  const auto same = revelation_transform(ScoringFunction::se(), Bijection::identity());
  EXPECT_EQ(same(1.5, 0.2), ScoringFunction::se()(1.5, 0.2));
  const auto doubled = revelation_transform(ScoringFunction::se(), Bijection::scale(2.0));
  const auto f = atoms({0, 1}, {0.5, 0.5});
  const double brute = oracle::grid_argmin([&](double x) { return expected_score(doubled, x, f); }, -1, 3, 40001);
  EXPECT_NEAR(brute, 1.0, 1e-4);
  EXPECT_NEAR(bayes_rule_numeric(f, doubled).representative, 1.0, 1e-6);
  EXPECT_NEAR(bayes_rule_closed(f, doubled).representative, 1.0, 1e-15);
}

TEST(Revelation, LogRevealedMedian) {
  const auto s = revelation_transform(ScoringFunction::pinball(0.5), Bijection::log());
  const double e2 = std::exp(2.0);
  const auto f = atoms({1, e2}, {0.5, 0.5});
  const auto sol = bayes_rule_numeric(f, s);
  EXPECT_NEAR(sol.lo, 0.0, 1e-6);
  EXPECT_NEAR(sol.hi, 2.0, 1e-6);
  // The median set [1, e^2] maps to [0, 2]; the representative is its midpoint.
  const auto closed = bayes_rule_closed(f, s);
  EXPECT_NEAR(closed.lo, 0.0, 1e-12);
  EXPECT_NEAR(closed.hi, 2.0, 1e-12);
  EXPECT_NEAR(closed.representative, 1.0, 1e-12);
}

TEST(Revelation, WrongInverseIsRejected) {
  const Bijection bad(NamedFn::scale(2.0), NamedFn::scale(0.4));
  try {
    revelation_transform(ScoringFunction::se(), bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InverseMismatch);
  }
}

TEST(Mixture, UnitWeightAndMeanRecovery) {
  const auto one = mixture_score({{ScoringFunction::se(), 1.0}});
  EXPECT_EQ(one(3, 1), 4.0);
  const auto mix = mixture_score({{ScoringFunction::se(), 0.5}, {ScoringFunction::patton(0.0), 0.5}});
  const auto f = atoms({1, 3}, {0.5, 0.5});
  EXPECT_NEAR(oracle::grid_argmin([&](double x) { return expected_score(mix, x, f); }, 0.5, 4, 35001), 2.0, 1e-4);
  EXPECT_NEAR(bayes_rule_numeric(f, mix).representative, 2.0, 1e-6);
}

TEST(Mixture, DifferentFunctionalsRejected) {
  try {
    mixture_score({{ScoringFunction::se(), 1.0}, {ScoringFunction::ae(), 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedFunctionals);
  }
}

TEST(InducedScore, Examples) {
  const auto two = atoms({0, 1}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(induced_proper_score(ScoringFunction::se(), Functional::mean(), two, 1.0), 0.25);
  EXPECT_EQ(induced_proper_score(ScoringFunction::pinball(0.5), Functional::median(), Distribution::point_mass(2), 2.0),
            0.0);
  const auto g = Distribution::point_mass(0.0);
  auto expected_induced = [&](const Distribution& forecast) {
    return measures::expectation(two, [&](double y) {
      return induced_proper_score(ScoringFunction::se(), Functional::mean(), forecast, y);
    });
  };
  EXPECT_DOUBLE_EQ(expected_induced(two), 0.25);
  EXPECT_DOUBLE_EQ(expected_induced(g), 0.5);
}

TEST(Homogeneity, FamilyOrders) {
  EXPECT_EQ(homogeneity_order(ScoringFunction::se()), 2.0);
  EXPECT_EQ(homogeneity_order(ScoringFunction::ae()), 1.0);
  EXPECT_EQ(homogeneity_order(ScoringFunction::ape()), 0.0);
  EXPECT_EQ(homogeneity_order(ScoringFunction::re()), 0.0);
  EXPECT_EQ(homogeneity_order(ScoringFunction::patton(0.0)), 0.0);
  EXPECT_EQ(homogeneity_order(ScoringFunction::patton(3.0)), 3.0);
  EXPECT_EQ(homogeneity_order(ScoringFunction::power_bregman(2.5)), 2.5);
  EXPECT_EQ(homogeneity_order(ScoringFunction::gpl_power(0.3, 0.5)), 0.5);
  EXPECT_EQ(homogeneity_order(weighted_score(ScoringFunction::se(), WeightFn(NamedFn::reciprocal_square()))), 0.0);
  EXPECT_FALSE(homogeneity_order(ScoringFunction::bregman(ConvexSpec::bounded_rational())).has_value());
  EXPECT_FALSE(homogeneity_order(ScoringFunction::bregman(ConvexSpec::custom_grid(-2, 2, {4, 1, 0, 1, 4}))));
  const auto p0 = ScoringFunction::patton(0.0);
  for (double c : {0.5, 2.0}) EXPECT_NEAR(p0(c * 1.3, c * 0.4), p0(1.3, 0.4), 1e-14);
}

TEST(Kinks, PiecewiseFamilies) {
  EXPECT_EQ(ScoringFunction::pinball(0.2).kinks(1.5), std::vector<double>{1.5});
  EXPECT_TRUE(ScoringFunction::se().kinks(1.5).empty());
  EXPECT_EQ(ScoringFunction::zero_one(0.5).kinks(2.0), (std::vector<double>{1.5, 2.5}));
  EXPECT_EQ(ScoringFunction::survival(2.0).kinks(2.0), (std::vector<double>{1.0, 4.0}));
}

TEST(Metadata, ElicitedFunctionals) {
  EXPECT_EQ(ScoringFunction::se().elicits()->label(), "mean");
  EXPECT_EQ(ScoringFunction::ae().elicits()->label(), "quantile(0.5)");
  EXPECT_EQ(*ScoringFunction::ape().elicits(), Functional::beta_median(-1.0));
  EXPECT_EQ(*ScoringFunction::re().elicits(), Functional::beta_median(1.0));
  EXPECT_EQ(*ScoringFunction::squared_relative_error().elicits(),
            Functional::ratio(NamedFn::square(), NamedFn::identity()));
  EXPECT_EQ(*ScoringFunction::zero_one(0.2).elicits(), Functional::modal_midpoint(0.2));
  EXPECT_FALSE(ScoringFunction::custom("c", [](double, double) { return 0.0; }, Interval::real_line(),
                                       Interval::real_line())
                   .elicits()
                   .has_value());
}
