// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Randomized criteria draw finite atom measures; parametric laws are
// materialized on equal-probability quantile cells before any functional sees them.

#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "scorelab/format.hpp"
#include "scorelab/lab.hpp"
#include "scorelab/optimal.hpp"
#include "scorelab/random.hpp"
#include "scorelab/simstudy.hpp"

using namespace scorelab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects failure messages; the first few end up in the detail column.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }
  Outcome outcome(const std::string& summary) const {
    Outcome o{failures_.empty(), summary};
    if (!failures_.empty()) {
      o.detail += "; " + std::to_string(failures_.size()) + "/" + std::to_string(checks_) + " checks failed:";
      for (std::size_t i = 0; i < failures_.size() && i < 4; ++i) o.detail += " [" + failures_[i] + "]";
    }
    return o;
  }

 private:
  std::size_t checks_ = 0;
  std::vector<std::string> failures_;
};

std::string fmt(double v) { return format_number(v); }

std::string secs(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", v);
  return buf;
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome exact_optima() {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"patton-table"}, out, err);
  const double elapsed = seconds_since(start);
  c.expect(code == 0, "exit code " + std::to_string(code) + " " + err.str());
  const std::map<std::string, double> printed{
      {"4", 3.4048}, {"6", 2.8216}, {"8", 2.6573}, {"10", 2.5801}, {"inf", 2.3660}};
  std::map<std::string, double> got;
  const auto rows = csv_rows(out.str());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    if (cells.size() == 2) got[cells[0]] = parse_number(cells[1]);
  }
  for (const auto& [nu, value] : printed) {
    c.expect(got.count(nu) == 1, "missing nu=" + nu);
    if (got.count(nu)) c.expect(std::abs(got[nu] - value) <= 5e-4, "nu=" + nu + " got " + fmt(got[nu]));
  }
  const double closed = 2.0 / (std::pow(2.0, 2.0 / 3.0) - 1.0);
  c.expect(got.count("4") && std::abs(got["4"] - closed) <= 1e-6, "nu=4 vs closed form " + fmt(closed));
  c.expect(elapsed < 2.0, "runtime " + fmt(elapsed) + " s");
  std::string summary = "patton-table";
  for (const auto& [nu, v] : got) summary += " " + nu + "->" + fmt(v);
  return c.outcome(summary + " in " + secs(elapsed));
}

Outcome chisq_constants() {
  Checker c;
  const auto chi = Distribution::scaled_chisq1(1.0);
  const double median = functionals::beta_median(chi, 0.0).representative;
  const double median1 = functionals::beta_median(chi, 1.0).representative;
  c.expect(std::abs(median - 0.455) <= 2e-3, "median " + fmt(median));
  c.expect(std::abs(median1 - 2.366) <= 2e-3, "1-median " + fmt(median1));
  c.expect(std::abs(median - oracle::chisq_median(1.0)) <= 1e-4, "median vs incomplete-gamma oracle");
  c.expect(std::abs(median1 - oracle::chisq_median(3.0)) <= 2e-3, "1-median vs incomplete-gamma oracle");
  return c.outcome("median " + fmt(median) + ", 1-median " + fmt(median1));
}

Outcome simulation_levels() {
  Checker c;
  const std::map<std::string, double> ae{
      {"statistician", 0.97}, {"optimist", 4.35}, {"pessimist", 0.96}, {"bayes", 0.86}};
  const std::map<std::string, double> re{
      {"statistician", 0.97}, {"optimist", 0.87}, {"pessimist", 19.24}, {"bayes", 0.75}};
  std::string summary;
  double worst = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto start = std::chrono::steady_clock::now();
    StudyConfig config;
    config.n = 100000;
    config.seed = seed;
    const auto report = run_study(config);
    const double elapsed = seconds_since(start);
    c.expect(elapsed < 60.0, "seed " + std::to_string(seed) + " runtime " + fmt(elapsed) + " s");
    for (const auto& [table, score] : {std::pair{&ae, "ae"}, std::pair{&re, "re"}}) {
      for (const auto& [f, target] : *table) {
        const double got = report.cell(score, f).mean;
        const double rel = std::abs(got / target - 1.0);
        worst = std::max(worst, rel);
        c.expect(rel <= 0.05, "seed " + std::to_string(seed) + " " + score + "/" + f + " " + fmt(got) + " vs " +
                                  fmt(target) + " (" + fmt(100 * rel) + "%)");
      }
    }
    auto mean = [&](const char* s, const char* f) { return report.cell(s, f).mean; };
    c.expect(mean("se", "statistician") == mean("se", "bayes"), "se statistician = bayes");
    c.expect(mean("se", "bayes") < mean("se", "pessimist"), "se bayes < pessimist");
    c.expect(mean("se", "pessimist") < mean("se", "optimist"), "se pessimist < optimist");
    c.expect(mean("ape", "bayes") < mean("ape", "statistician"), "ape bayes < statistician");
    c.expect(mean("ape", "pessimist") < mean("ape", "statistician"), "ape pessimist < statistician");
    c.expect(mean("ape", "statistician") < mean("ape", "optimist"), "ape statistician < optimist");
    summary += "seed " + std::to_string(seed) + ": ae bayes " + fmt(mean("ae", "bayes")) + ", re bayes " +
               fmt(mean("re", "bayes")) + " (" + secs(elapsed) + "); ";
  }
  return c.outcome(summary + "worst relative deviation " + fmt(100 * worst) + "%");
}

Outcome duality() {
  Checker c;
  const std::vector<ScoringFunction> scores{
      ScoringFunction::se(),
      ScoringFunction::ae(),
      ScoringFunction::ape(),
      ScoringFunction::re(),
      ScoringFunction::beta_median(2.0),
      ScoringFunction::bregman(ConvexSpec::bounded_rational()),
      ScoringFunction::bregman(ConvexSpec::negative_log()),
      ScoringFunction::power_bregman(3.0),
      ScoringFunction::patton(0.0),
      ScoringFunction::patton(2.0),
      ScoringFunction::pinball(0.3),
      ScoringFunction::gpl(0.7, MonotoneSpec::log()),
      ScoringFunction::gpl_power(0.5, 0.5),
      ScoringFunction::asym_quadratic(0.8),
      ScoringFunction::expectile_bregman(0.25, ConvexSpec::bounded_rational()),
      ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::square(), NamedFn::identity(),
                                     Interval::positive()),
      ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::reciprocal(), NamedFn::reciprocal_square()),
      ScoringFunction::squared_relative_error(),
      ScoringFunction::obs_weighted_se(),
      ScoringFunction::zero_one(0.5),
      ScoringFunction::survival(1.5),
      weighted_score(ScoringFunction::se(), WeightFn(NamedFn::reciprocal_square())),
      revelation_transform(ScoringFunction::se(), Bijection::scale(2.0))};
  const AtomGenerator gen{0.1, 10.0};
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& s : scores) {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      auto rng = trial_stream(2024, trial);
      const auto d = gen(rng);
      const auto numeric = bayes_rule_numeric(d, s);
      const auto closed = bayes_rule_closed(d, s);
      const double gap = std::abs(numeric.representative - closed.representative);
      const bool inside = closed.representative >= numeric.lo - 1e-9 && closed.representative <= numeric.hi + 1e-9;
      if (!inside) worst = std::max(worst, gap);
      c.expect(gap <= 1e-6 || inside, s.label() + " on " + describe(d) + ": numeric " + fmt(numeric.representative) +
                                          " closed " + fmt(closed.representative));
      ++pairs;
    }
  }
  return c.outcome(std::to_string(scores.size()) + " scores x 100 laws (" + std::to_string(pairs) +
                   " pairs), largest gap outside argmin interval " + fmt(worst));
}

Outcome consistency_audits() {
  Checker c;
  const AtomGenerator real{-5.0, 5.0};
  const AtomGenerator positive{0.1, 10.0};
  struct Case {
    ScoringFunction s;
    Functional t;
    AtomGenerator gen;
  };
  std::vector<Case> cases{
      {ScoringFunction::bregman(ConvexSpec::square()), Functional::mean(), real},
      {ScoringFunction::bregman(ConvexSpec::patton(0.0)), Functional::mean(), positive},
      {ScoringFunction::bregman(ConvexSpec::patton(3.0)), Functional::mean(), positive},
      {ScoringFunction::bregman(ConvexSpec::bounded_rational()), Functional::mean(), real}};
  for (double alpha : {0.1, 0.5, 0.9}) {
    cases.push_back({ScoringFunction::gpl(alpha, MonotoneSpec::identity()), Functional::quantile(alpha), real});
    cases.push_back({ScoringFunction::gpl(alpha, MonotoneSpec::log()), Functional::quantile(alpha), positive});
    cases.push_back({ScoringFunction::gpl(alpha, MonotoneSpec::power(0.5)), Functional::quantile(alpha), positive});
  }
  for (double tau : {0.25, 0.5, 0.9}) {
    cases.push_back(
        {ScoringFunction::expectile_bregman(tau, ConvexSpec::bounded_rational()), Functional::expectile(tau), real});
  }
  cases.push_back({ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::square(), NamedFn::identity(),
                                                  Interval::positive()),
                   Functional::ratio(NamedFn::square(), NamedFn::identity()), positive});
  cases.push_back({ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::reciprocal(),
                                                  NamedFn::reciprocal_square()),
                   Functional::ratio(NamedFn::reciprocal(), NamedFn::reciprocal_square()), positive});
  const WeightFn w(NamedFn::reciprocal_square());
  cases.push_back({weighted_score(ScoringFunction::se(), w), weighted_functional(Functional::mean(), w), positive});
  double worst = -INFINITY;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& k = cases[i];
    const auto r = audit_consistency(k.s, k.t, k.gen, 200, 20, 100 + i);
    worst = std::max(worst, r.max_violation);
    c.expect(r.pass && r.max_violation <= 1e-9,
             k.s.label() + " vs " + k.t.label() + ": " + fmt(r.max_violation) + " " + r.worst_case);
  }
  return c.outcome(std::to_string(cases.size()) + " audits x 200 trials, largest violation " + fmt(worst));
}

Outcome mixture_closure() {
  Checker c;
  const std::vector<ScoringFunction> pool{ScoringFunction::se(),
                                          ScoringFunction::bregman(ConvexSpec::bounded_rational()),
                                          ScoringFunction::bregman(ConvexSpec::negative_log()),
                                          ScoringFunction::bregman(ConvexSpec::reciprocal()),
                                          ScoringFunction::power_bregman(3.0),
                                          ScoringFunction::patton(-0.5),
                                          ScoringFunction::patton(0.0),
                                          ScoringFunction::patton(0.5),
                                          ScoringFunction::patton(1.0),
                                          ScoringFunction::patton(3.0)};
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> weight(0.05, 3.0);
  const AtomGenerator positive{0.1, 10.0};
  double worst = -INFINITY;
  for (int i = 0; i < 20; ++i) {
    const std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (b == a) b = (a + 1) % pool.size();
    const double wa = weight(rng), wb = weight(rng);
    const auto mix = mixture_score({{pool[a], wa}, {pool[b], wb}});
    const auto r = audit_consistency(mix, Functional::mean(), positive, 200, 20, 700 + i);
    worst = std::max(worst, r.max_violation);
    c.expect(r.pass, mix.label() + ": " + fmt(r.max_violation));
  }
  return c.outcome("20 two-component mixtures, largest violation " + fmt(worst));
}

Outcome propriety() {
  Checker c;
  const AtomGenerator real{-5.0, 5.0};
  struct Case {
    ScoringFunction s;
    Functional t;
  };
  std::vector<Case> cases{{ScoringFunction::se(), Functional::mean()}};
  for (double alpha : {0.1, 0.5, 0.9}) cases.push_back({ScoringFunction::pinball(alpha), Functional::quantile(alpha)});
  for (double tau : {0.25, 0.75}) cases.push_back({ScoringFunction::asym_quadratic(tau), Functional::expectile(tau)});
  double worst = -INFINITY;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto r = propriety_audit(cases[i].s, cases[i].t, real, 100, 300 + i);
    worst = std::max(worst, r.max_violation);
    c.expect(r.pass, cases[i].s.label() + ": " + fmt(r.max_violation) + " " + r.worst_case);
  }
  return c.outcome(std::to_string(cases.size()) + " pairs x 100 (F, G) draws, largest violation " + fmt(worst));
}

Outcome cvar_construction() {
  Checker c;
  const auto ex = cvar_counterexample(0.5, 0, 1, 1.25, 2);
  c.expect(ex.cvar_f1 == 1.5, "CVaR(F1) " + fmt(ex.cvar_f1));
  c.expect(ex.cvar_f2 == 1.5, "CVaR(F2) " + fmt(ex.cvar_f2));
  c.expect(ex.cvar_mixture == 1.5625, "CVaR(mixture) " + fmt(ex.cvar_mixture));
  const std::vector<double> p_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const auto flagged = level_set_convexity(Functional::cvar(0.5), ex.f1, ex.f2, p_grid);
  c.expect(!flagged.convex(), "CVaR(0.5) level sets not flagged");

  const AtomGenerator positive{0.1, 10.0};
  const std::vector<Functional> elicitable{Functional::mean(), Functional::quantile(0.25), Functional::median(),
                                           Functional::expectile(0.8),
                                           Functional::ratio(NamedFn::square(), NamedFn::identity())};
  std::size_t violations = 0;
  for (const auto& t : elicitable) {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      auto rng = trial_stream(808, trial);
      const auto f0 = positive(rng);
      const auto f1 = align_to_shared_value(t, f0, positive(rng));
      const auto r = level_set_convexity(t, f0, f1, p_grid);
      c.expect(r.applicable, t.label() + " pair not sharing a value");
      if (!r.convex()) {
        ++violations;
        c.expect(false, t.label() + " violation " + fmt(r.max_distance));
      }
    }
  }
  return c.outcome("CVaR values (" + fmt(ex.cvar_f1) + ", " + fmt(ex.cvar_f2) + ", " + fmt(ex.cvar_mixture) +
                   "), CVaR max level-set distance " + fmt(flagged.max_distance) + "; " +
                   std::to_string(violations) + " violations over 500 elicitable pairs");
}

Outcome osband() {
  Checker c;
  const std::vector<double> xs{0.55, 1.05, 1.55, 2.05, 3.05};
  const std::vector<double> ys{0.3, 0.8, 1.3, 2.5, 4.0, 6.0};
  double worst_spread = 0.0, worst_h = 0.0;
  struct Case {
    ScoringFunction s;
    Functional t;
    std::optional<double> patton_b;
  };
  std::vector<Case> cases{{ScoringFunction::se(), Functional::mean(), std::nullopt}};
  for (double b : {0.0, 2.0, 3.0}) cases.push_back({ScoringFunction::patton(b), Functional::mean(), b});
  for (double alpha : {0.1, 0.5, 0.9})
    cases.push_back({ScoringFunction::pinball(alpha), Functional::quantile(alpha), std::nullopt});
  for (const auto& k : cases) {
    const auto r = osband_ratio_scan(k.s, k.t, xs, ys);
    worst_spread = std::max(worst_spread, r.max_spread);
    c.expect(r.max_spread <= 1e-4, k.s.label() + " spread " + fmt(r.max_spread));
    if (k.patton_b) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double phi2 = std::pow(xs[i], *k.patton_b - 2.0);
        const double rel = std::abs(r.h[i] / phi2 - 1.0);
        worst_h = std::max(worst_h, rel);
        c.expect(rel <= 1e-3, k.s.label() + " h(" + fmt(xs[i]) + ")=" + fmt(r.h[i]) + " vs " + fmt(phi2));
      }
    }
  }
  return c.outcome("largest spread " + fmt(worst_spread) + ", largest relative h error " + fmt(worst_h));
}

Outcome score_curves() {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  struct Curve {
    std::string family, from, to, steps;
  };
  std::string summary;
  for (const auto& curve : {Curve{"patton", "-1", "3", "17"}, Curve{"gplpower", "-1", "2", "13"}}) {
    std::ostringstream out, err;
    const int code = cli::run({"curve", "--family", curve.family, "--b-from", curve.from, "--b-to", curve.to,
                               "--b-steps", curve.steps, "--n", "100000", "--seed", "1"},
                              out, err);
    c.expect(code == 0, curve.family + " exit " + std::to_string(code) + " " + err.str());
    // b -> forecaster -> (mean, stderr)
    std::map<std::string, std::map<std::string, std::pair<double, double>>> table;
    const auto rows = csv_rows(out.str());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto cells = split(rows[i]);
      if (cells.size() != 6) continue;
      table[cells[0]][cells[1]] = {parse_number(cells[2]), parse_number(cells[3])};
    }
    c.expect(table.size() == std::stoul(curve.steps), curve.family + " has " + std::to_string(table.size()) + " b values");
    std::size_t checked = 0;
    for (const auto& [b, row] : table) {
      const auto it = row.find("bayes");
      c.expect(it != row.end(), curve.family + " b=" + b + " has no bayes row");
      if (it == row.end()) continue;
      for (const auto& [f, stats] : row) {
        if (f == "bayes") continue;
        const double tol = 2.0 * std::hypot(stats.second, it->second.second);
        c.expect(it->second.first <= stats.first + tol,
                 curve.family + " b=" + b + " bayes " + fmt(it->second.first) + " vs " + f + " " + fmt(stats.first));
        ++checked;
      }
    }
    summary += curve.family + ": " + std::to_string(table.size()) + " b values, " + std::to_string(checked) +
               " comparisons; ";
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 120.0, "runtime " + fmt(elapsed) + " s");
  return c.outcome(summary + secs(elapsed));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact relative-error optima", exact_optima},
      {"chi-square median constants", chisq_constants},
      {"simulation study AE/RE levels and SE/APE orderings", simulation_levels},
      {"numeric vs closed-form Bayes rules", duality},
      {"consistency audits of characterization families", consistency_audits},
      {"mixtures of mean-consistent scores", mixture_closure},
      {"propriety of induced scores", propriety},
      {"CVaR counterexample and level-set convexity", cvar_construction},
      {"Osband gradient-ratio scans", osband},
      {"score curves: Bayes forecaster minimal", score_curves},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = seconds_since(start);
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << ": " << criteria[i].first << " ["
              << secs(elapsed) << "] " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
