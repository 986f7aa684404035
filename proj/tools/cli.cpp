#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"
#include "scorelab/lab.hpp"
#include "scorelab/optimal.hpp"
#include "scorelab/random.hpp"
#include "scorelab/serialization.hpp"
#include "scorelab/simstudy.hpp"

namespace scorelab::cli {

namespace {

using io::Json;

/// Resolved configuration, echoed as '#' lines in CSV and as an object in JSON.
class Header {
 public:
  explicit Header(std::string command) { add("command", std::move(command)); }

  void add(std::string key, std::string value) { items_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, double value) { add(std::move(key), format_number(value)); }

  void write_csv(std::ostream& out) const {
    for (const auto& [k, v] : items_) out << "# " << k << '=' << v << '\n';
  }
  Json json() const {
    Json j = Json::object();
    for (const auto& [k, v] : items_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Splits on commas outside JSON brackets.
std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  int depth = 0;
  auto flush = [&] {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
    item.clear();
  };
  for (char ch : text) {
    if (ch == '{' || ch == '[') ++depth;
    if (ch == '}' || ch == ']') --depth;
    if (ch == ',' && depth == 0) {
      flush();
    } else {
      item += ch;
    }
  }
  flush();
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// JSON given inline or, with a leading '@', read from a file.
Json json_argument(const std::string& text) {
  return io::parse(!text.empty() && text[0] == '@' ? read_text(text.substr(1)) : text);
}

void write_to(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  require(file.good(), ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  body(file);
}

ScoringFunction score_by_name(const std::string& name) {
  if (name == "se") return ScoringFunction::se();
  if (name == "ae") return ScoringFunction::ae();
  if (name == "ape") return ScoringFunction::ape();
  if (name == "re") return ScoringFunction::re();
  if (!name.empty() && (name[0] == '{' || name[0] == '@')) return io::score_from_json(json_argument(name));
  fail(ErrorCode::InvalidArgument, "unknown score '" + name + "' (use se, ae, ape, re or a JSON descriptor)");
}

// ---------------------------------------------------------------------------
// Subcommands

struct SimulateArgs {
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  std::string out;
};

int simulate(const SimulateArgs& a, std::ostream& out) {
  const ForecastPath path = simulate_garch(GarchParams{}, a.n, a.seed);
  Header h("simulate");
  h.add("n", std::to_string(a.n));
  h.add("seed", std::to_string(a.seed));
  h.add("burn_in", std::to_string(kBurnIn));
  write_to(a.out, out, [&](std::ostream& os) {
    h.write_csv(os);
    io::write_path_csv(os, path);
  });
  return kExitOk;
}

struct StudyArgs {
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  std::string scores = "se,ae,ape,re";
  double epsilon = 1e-10;
  std::string path;
  std::string out;
  std::string format = "csv";
};

int study(const StudyArgs& a, std::ostream& out) {
  StudyConfig config;
  config.n = a.n;
  config.seed = a.seed;
  config.epsilon = a.epsilon;
  for (const auto& name : split_list(a.scores)) config.scores.push_back(score_by_name(name));
  EvaluationReport report;
  Header h("study");
  if (!a.path.empty()) {
    std::ifstream in(a.path);
    require(in.good(), ErrorCode::InvalidArgument, "cannot read path file '" + a.path + "'");
    const ForecastPath path = io::read_path_csv(in);
    report = evaluate_path(path, config);
    h.add("path", a.path);
    h.add("n", std::to_string(path.size()));
    h.add("seed", std::to_string(path.seed));
  } else {
    report = run_study(config);
    h.add("n", std::to_string(a.n));
    h.add("seed", std::to_string(a.seed));
  }
  h.add("scores", a.scores);
  h.add("epsilon", a.epsilon);

  auto csv = [&](std::ostream& os) {
    h.write_csv(os);
    os << "score,forecaster,mean_score,stderr,n,skipped,seed\n";
    for (const auto& c : report.cells) {
      os << c.score << ',' << c.forecaster << ',' << format_number(c.mean) << ',' << format_number(c.std_error)
         << ',' << c.n << ',' << c.skipped << ',' << report.seed << '\n';
    }
    for (std::size_t i = 0; i < report.scores.size(); ++i) {
      os << "# ranking " << report.scores[i] << ':';
      for (const auto& f : report.rankings[i]) os << ' ' << f;
      os << '\n';
    }
    for (const auto& note : report.notes) os << "# note: " << note << '\n';
  };
  auto json = [&](std::ostream& os) {
    Json j{{"config", h.json()}, {"report", io::to_json(report)}};
    os << j.dump(2) << '\n';
  };
  if (!a.out.empty()) {
    write_to(a.out, out, csv);
    write_to(a.out + ".json", out, json);
  } else if (a.format == "json") {
    json(out);
  } else {
    csv(out);
  }
  return kExitOk;
}

struct BayesArgs {
  std::string dist;
  std::string score;
  bool closed_form = false;
  bool root = false;
  std::optional<double> lo;
  std::optional<double> hi;
};

int bayes(const BayesArgs& a, std::ostream& out) {
  const Distribution dist = io::distribution_from_json(json_argument(a.dist));
  const ScoringFunction score = io::score_from_json(json_argument(a.score));
  BayesSolution solution;
  if (a.closed_form) {
    solution = bayes_rule_closed(dist, score);
  } else if (a.root) {
    solution = bayes_rule_root(dist, score);
  } else {
    std::optional<Interval> bounds;
    if (a.lo || a.hi) {
      require(a.lo && a.hi, ErrorCode::InvalidArgument, "--lo and --hi must be given together");
      bounds = Interval::closed(*a.lo, *a.hi);
    }
    solution = bayes_rule_numeric(dist, score, bounds);
  }
  Header h("bayes");
  h.add("score", score.label());
  h.add("dist_atoms", std::to_string(dist.size()));
  h.add("method", a.closed_form ? "closed-form" : (a.root ? "root" : "numeric"));
  Json j{{"config", h.json()}, {"solution", io::to_json(solution)}};
  if (score.elicits()) j["functional"] = score.elicits()->label();
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct PattonArgs {
  std::string nu = "4,6,8,10,inf";
};

int patton_table(const PattonArgs& a, std::ostream& out) {
  Header h("patton-table");
  h.add("nu", a.nu);
  h.write_csv(out);
  out << "nu,exact_optimum\n";
  for (const auto& item : split_list(a.nu)) {
    const double nu = parse_number(item);
    out << item << ',' << format_number(relative_error_optimum_t(nu)) << '\n';
  }
  return kExitOk;
}

struct CurveArgs {
  std::string family = "patton";
  std::optional<double> b_from;
  std::optional<double> b_to;
  std::optional<std::size_t> b_steps;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  std::string out;
};

int curve(const CurveArgs& a, std::ostream& out) {
  CurveFamily family;
  double from = -1.0, to = 3.0;
  std::size_t steps = 17;
  if (a.family == "patton") {
    family = CurveFamily::Patton;
  } else if (a.family == "gplpower") {
    family = CurveFamily::GPLPower;
    to = 2.0;
    steps = 13;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown curve family '" + a.family + "' (use patton or gplpower)");
  }
  from = a.b_from.value_or(from);
  to = a.b_to.value_or(to);
  steps = a.b_steps.value_or(steps);
  const auto rows = score_curve(family, b_grid(from, to, steps), a.n, a.seed);
  Header h("curve");
  h.add("family", a.family);
  h.add("b_from", from);
  h.add("b_to", to);
  h.add("b_steps", std::to_string(steps));
  h.add("n", std::to_string(a.n));
  h.add("seed", std::to_string(a.seed));
  write_to(a.out, out, [&](std::ostream& os) {
    h.write_csv(os);
    os << "b,forecaster,mean_score,stderr,n,seed\n";
    for (const auto& r : rows) {
      os << format_number(r.b) << ',' << r.forecaster << ',' << format_number(r.mean) << ','
         << format_number(r.std_error) << ',' << r.n << ',' << r.seed << '\n';
    }
  });
  return kExitOk;
}

struct CheckArgs {
  std::string suite;
  std::uint64_t seed = 1;
  std::optional<std::size_t> trials;
};

Json consistency_suite(std::uint64_t seed, std::size_t trials, bool& ok) {
  const AtomGenerator real{-5.0, 5.0};
  const AtomGenerator positive{0.1, 10.0};
  struct Case {
    ScoringFunction s;
    Functional t;
    AtomGenerator gen;
  };
  const std::vector<Case> cases{
      {ScoringFunction::se(), Functional::mean(), real},
      {ScoringFunction::bregman(ConvexSpec::bounded_rational()), Functional::mean(), real},
      {ScoringFunction::patton(0.0), Functional::mean(), positive},
      {ScoringFunction::pinball(0.3), Functional::quantile(0.3), real},
      {ScoringFunction::gpl(0.5, MonotoneSpec::log()), Functional::median(), positive},
      {ScoringFunction::asym_quadratic(0.8), Functional::expectile(0.8), real},
      {ScoringFunction::ratio_bregman(ConvexSpec::square(), NamedFn::square(), NamedFn::identity(),
                                      Interval::positive()),
       Functional::ratio(NamedFn::square(), NamedFn::identity()), positive},
      {weighted_score(ScoringFunction::se(), WeightFn(NamedFn::reciprocal_square())),
       weighted_functional(Functional::mean(), WeightFn(NamedFn::reciprocal_square())), positive},
  };
  Json reports = Json::array();
  for (const auto& c : cases) {
    const auto r = audit_consistency(c.s, c.t, c.gen, trials, 20, seed);
    ok = ok && r.pass;
    Json j = io::to_json(r);
    j["score"] = c.s.label();
    j["functional"] = c.t.label();
    reports.push_back(j);
  }
  return reports;
}

Json convexity_suite(std::uint64_t seed, std::size_t trials, bool& ok) {
  const AtomGenerator positive{0.1, 10.0};
  const std::vector<double> p_grid{0.1, 0.25, 0.5, 0.75, 0.9};
  const std::vector<Functional> functionals{Functional::mean(), Functional::quantile(0.5), Functional::expectile(0.25),
                                            Functional::ratio(NamedFn::square(), NamedFn::identity())};
  Json reports = Json::array();
  for (const auto& t : functionals) {
    std::size_t violations = 0;
    std::size_t applicable = 0;
    double worst = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      auto rng = trial_stream(seed, trial);
      const Distribution f0 = positive(rng);
      const Distribution f1 = align_to_shared_value(t, f0, positive(rng));
      const auto r = level_set_convexity(t, f0, f1, p_grid);
      if (r.applicable) ++applicable;
      if (!r.convex()) ++violations;
      worst = std::max(worst, r.max_distance);
    }
    ok = ok && violations == 0;
    reports.push_back({{"functional", t.label()},
                       {"pairs", trials},
                       {"applicable", applicable},
                       {"pairs_with_violation", violations},
                       {"max_distance", io::number(worst)},
                       {"verdict", violations == 0 ? "convex" : "violation"}});
  }
  return reports;
}

Json osband_suite(bool& ok) {
  const std::vector<double> xs{0.55, 1.05, 2.05, 3.05};
  const std::vector<double> ys{0.3, 0.8, 1.5, 2.5, 4.0, 6.0};
  struct Case {
    ScoringFunction s;
    Functional t;
  };
  const std::vector<Case> cases{{ScoringFunction::se(), Functional::mean()},
                                {ScoringFunction::patton(0.0), Functional::mean()},
                                {ScoringFunction::patton(2.0), Functional::mean()},
                                {ScoringFunction::patton(3.0), Functional::mean()},
                                {ScoringFunction::pinball(0.25), Functional::quantile(0.25)}};
  Json reports = Json::array();
  for (const auto& c : cases) {
    const auto r = osband_ratio_scan(c.s, c.t, xs, ys);
    const bool pass = r.max_spread <= 1e-4;
    ok = ok && pass;
    Json j = io::to_json(r);
    j["score"] = c.s.label();
    j["functional"] = c.t.label();
    j["verdict"] = pass ? "pass" : "fail";
    reports.push_back(j);
  }
  return reports;
}

Json cvar_suite(bool& ok) {
  const auto example = cvar_counterexample(0.5, 0.0, 1.0, 1.25, 2.0);
  const std::vector<double> p_grid{0.25, 0.5, 0.75};
  const auto r = level_set_convexity(Functional::cvar(0.5), example.f1, example.f2, p_grid);
  ok = r.convex();
  return {{"counterexample", io::to_json(example)}, {"level_sets", io::to_json(r)}};
}

Json propriety_suite(std::uint64_t seed, std::size_t trials, bool& ok) {
  const AtomGenerator real{-5.0, 5.0};
  struct Case {
    ScoringFunction s;
    Functional t;
  };
  const std::vector<Case> cases{{ScoringFunction::se(), Functional::mean()},
                                {ScoringFunction::pinball(0.5), Functional::median()},
                                {ScoringFunction::asym_quadratic(0.7), Functional::expectile(0.7)}};
  Json reports = Json::array();
  for (const auto& c : cases) {
    const auto r = propriety_audit(c.s, c.t, real, trials, seed);
    ok = ok && r.pass;
    Json j = io::to_json(r);
    j["score"] = c.s.label();
    j["functional"] = c.t.label();
    reports.push_back(j);
  }
  return reports;
}

int check(const CheckArgs& a, std::ostream& out) {
  Header h("check");
  h.add("suite", a.suite);
  h.add("seed", std::to_string(a.seed));
  bool ok = true;
  Json body;
  if (a.suite == "consistency") {
    const std::size_t trials = a.trials.value_or(200);
    h.add("trials", std::to_string(trials));
    body = consistency_suite(a.seed, trials, ok);
  } else if (a.suite == "convexity") {
    const std::size_t trials = a.trials.value_or(100);
    h.add("trials", std::to_string(trials));
    body = convexity_suite(a.seed, trials, ok);
  } else if (a.suite == "osband") {
    body = osband_suite(ok);
  } else if (a.suite == "cvar") {
    body = cvar_suite(ok);
  } else if (a.suite == "propriety") {
    const std::size_t trials = a.trials.value_or(100);
    h.add("trials", std::to_string(trials));
    body = propriety_suite(a.seed, trials, ok);
  } else {
    fail(ErrorCode::InvalidArgument,
         "unknown suite '" + a.suite + "' (use consistency, convexity, osband, cvar or propriety)");
  }
  Json j{{"config", h.json()}, {"reports", body}, {"verdict", ok ? "pass" : "fail"}};
  out << j.dump(2) << '\n';
  return ok ? kExitOk : kExitAuditFailure;
}

}  // namespace

std::vector<std::string> apply_config_file(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      require(i + 1 < args.size(), ErrorCode::InvalidArgument, "--config needs a file name");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (config_path.empty()) return out;

  auto present = [&](const std::string& flag) {
    return std::any_of(out.begin(), out.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::stringstream text(read_text(config_path));
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> extra;
  while (std::getline(text, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::ParseError,
            config_path + ":" + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    if (present(flag)) continue;
    if (value == "true") {
      extra.push_back(flag);
    } else if (value != "false") {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consistent scoring functions, Bayes rules and the GARCH forecasting study", "scorelab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a GARCH path and write it as CSV");
  sim_cmd->add_option("--n", sim.n, "Number of recorded steps")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim.seed, "Random seed")->envname("SCORELAB_SEED");
  sim_cmd->add_option("--out", sim.out, "Output file (default stdout)");

  StudyArgs st;
  auto* st_cmd = app.add_subcommand("study", "Mean scores of the four forecasters");
  st_cmd->add_option("--n", st.n, "Number of forecasts")->check(CLI::PositiveNumber);
  st_cmd->add_option("--seed", st.seed, "Random seed")->envname("SCORELAB_SEED");
  st_cmd->add_option("--scores", st.scores, "Comma separated scores: se, ae, ape, re or JSON descriptors");
  st_cmd->add_option("--epsilon", st.epsilon, "Bayes forecast when the expected score is infinite everywhere");
  st_cmd->add_option("--path", st.path, "Evaluate a path written by simulate instead of simulating");
  st_cmd->add_option("--out", st.out, "CSV output file; JSON goes to <out>.json");
  st_cmd->add_option("--format", st.format, "Stdout format when --out is absent")->check(CLI::IsMember({"csv", "json"}));

  BayesArgs by;
  auto* by_cmd = app.add_subcommand("bayes", "Optimal point forecast for a distribution and a score");
  by_cmd->add_option("--dist", by.dist, "Distribution JSON (or @file)")->required();
  by_cmd->add_option("--score", by.score, "Score JSON (or @file)")->required();
  auto* closed_flag = by_cmd->add_flag("--closed-form", by.closed_form, "Evaluate the elicited functional");
  by_cmd->add_flag("--root", by.root, "Solve the identification equation")->excludes(closed_flag);
  by_cmd->add_option("--lo", by.lo, "Lower search bound");
  by_cmd->add_option("--hi", by.hi, "Upper search bound");

  PattonArgs pt;
  auto* pt_cmd = app.add_subcommand("patton-table", "Exact relative-error optima for squared t variables");
  pt_cmd->add_option("--nu", pt.nu, "Comma separated degrees of freedom; inf for the normal limit");

  CurveArgs cv;
  auto* cv_cmd = app.add_subcommand("curve", "Mean score against the family parameter b");
  cv_cmd->add_option("--family", cv.family, "patton or gplpower")->check(CLI::IsMember({"patton", "gplpower"}));
  cv_cmd->add_option("--b-from", cv.b_from, "First b");
  cv_cmd->add_option("--b-to", cv.b_to, "Last b");
  cv_cmd->add_option("--b-steps", cv.b_steps, "Number of grid points")->check(CLI::PositiveNumber);
  cv_cmd->add_option("--n", cv.n, "Number of forecasts")->check(CLI::PositiveNumber);
  cv_cmd->add_option("--seed", cv.seed, "Random seed")->envname("SCORELAB_SEED");
  cv_cmd->add_option("--out", cv.out, "Output file (default stdout)");

  CheckArgs ck;
  auto* ck_cmd = app.add_subcommand("check", "Run a randomized audit suite");
  ck_cmd->add_option("--suite", ck.suite, "consistency, convexity, osband, cvar or propriety")
      ->required()
      ->check(CLI::IsMember({"consistency", "convexity", "osband", "cvar", "propriety"}));
  ck_cmd->add_option("--seed", ck.seed, "Random seed")->envname("SCORELAB_SEED");
  ck_cmd->add_option("--trials", ck.trials, "Trials per audit")->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> args = apply_config_file(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (*sim_cmd) return simulate(sim, out);
    if (*st_cmd) return study(st, out);
    if (*by_cmd) return bayes(by, out);
    if (*pt_cmd) return patton_table(pt, out);
    if (*cv_cmd) return curve(cv, out);
    if (*ck_cmd) return check(ck, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  err << app.help();
  return kExitError;
}

}  // namespace scorelab::cli
