#include "scorelab/serialization.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "scorelab/error.hpp"
#include "scorelab/format.hpp"

namespace scorelab::io {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object with key '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing key '") + key + "' in " + j.dump());
  return *it;
}

double num(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  bad(std::string("key '") + key + "' must be a number");
}

double num_or(const Json& j, const char* key, double fallback) {
  return j.is_object() && j.contains(key) ? num(j, key) : fallback;
}

std::vector<double> vec(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) bad(std::string("key '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (e.is_number()) out.push_back(e.get<double>());
    else if (e.is_string()) out.push_back(parse_number(e.get<std::string>()));
    else bad(std::string("array '") + key + "' holds a non-number");
  }
  return out;
}

std::string str(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) bad(std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

Json numbers(std::span<const double> values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

}  // namespace

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return parse_number(format_number(v));
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Distributions

Json to_json(const Distribution& dist) {
  Json j;
  if (const auto& spec = dist.parametric_spec()) {
    j["kind"] = "parametric";
    switch (spec->family) {
      case ParametricFamily::StandardNormal: j["family"] = "standard_normal"; break;
      case ParametricFamily::StudentT:
        j["family"] = "student_t";
        j["nu"] = spec->nu;
        break;
      case ParametricFamily::ScaledChiSq1:
        j["family"] = "scaled_chisq1";
        j["scale"] = spec->scale;
        break;
    }
    j["resolution"] = dist.size();
    return j;
  }
  switch (dist.kind()) {
    case Distribution::Kind::Sample:
      j["kind"] = "sample";
      j["values"] = std::vector<double>(dist.sample_draws().begin(), dist.sample_draws().end());
      return j;
    case Distribution::Kind::Grid:
      j["kind"] = "grid";
      j["lo"] = dist.grid_lo();
      j["hi"] = dist.grid_hi();
      j["density"] = std::vector<double>(dist.grid_density().begin(), dist.grid_density().end());
      return j;
    default:
      j["kind"] = "atoms";
      j["points"] = std::vector<double>(dist.points().begin(), dist.points().end());
      j["weights"] = std::vector<double>(dist.weights().begin(), dist.weights().end());
      return j;
  }
}

Distribution distribution_from_json(const Json& j) {
  const std::string kind = str(j, "kind");
  if (kind == "atoms") {
    // Either parallel "points"/"weights" arrays or "atoms": [[point, weight], ...].
    if (!j.contains("atoms")) return Distribution::atoms(vec(j, "points"), vec(j, "weights"));
    std::vector<double> points, weights;
    for (const auto& pair : field(j, "atoms")) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
        bad("each entry of 'atoms' must be [point, weight]");
      points.push_back(pair[0].get<double>());
      weights.push_back(pair[1].get<double>());
    }
    return Distribution::atoms(points, weights);
  }
  if (kind == "point_mass") return Distribution::point_mass(num(j, "point"));
  if (kind == "sample") return Distribution::sample(vec(j, "values"));
  if (kind == "grid") return Distribution::grid(num(j, "lo"), num(j, "hi"), vec(j, "density"));
  if (kind == "parametric") {
    const std::string family = str(j, "family");
    const auto resolution =
        static_cast<std::size_t>(num_or(j, "resolution", static_cast<double>(Distribution::kDefaultResolution)));
    if (family == "standard_normal") return Distribution::standard_normal(resolution);
    if (family == "student_t") return Distribution::student_t(num(j, "nu"), resolution);
    if (family == "scaled_chisq1") return Distribution::scaled_chisq1(num_or(j, "scale", 1.0), resolution);
    bad("unknown parametric family '" + family + "'");
  }
  bad("unknown distribution kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Basis functions

Json to_json(const NamedFn& fn) {
  using K = NamedFn::Kind;
  switch (fn.kind()) {
    case K::Identity: return {{"kind", "identity"}};
    case K::Square: return {{"kind", "square"}};
    case K::Reciprocal: return {{"kind", "reciprocal"}};
    case K::ReciprocalSquare: return {{"kind", "reciprocal-square"}};
    case K::Constant: return {{"kind", "constant"}, {"c", fn.param()}};
    case K::Power: return {{"kind", "power"}, {"p", fn.param()}};
    case K::Log: return {{"kind", "log"}};
    case K::Exp: return {{"kind", "exp"}};
    case K::Scale: return {{"kind", "scale"}, {"c", fn.param()}};
    case K::Custom: break;
  }
  fail(ErrorCode::Unsupported, "custom function '" + fn.label() + "' is not serializable");
}

NamedFn named_fn_from_json(const Json& j) {
  const std::string kind = str(j, "kind");
  if (kind == "identity") return NamedFn::identity();
  if (kind == "square") return NamedFn::square();
  if (kind == "reciprocal") return NamedFn::reciprocal();
  if (kind == "reciprocal-square") return NamedFn::reciprocal_square();
  if (kind == "constant") return NamedFn::constant(num_or(j, "c", 1.0));
  if (kind == "power") return NamedFn::power(num(j, "p"));
  if (kind == "log") return NamedFn::log();
  if (kind == "exp") return NamedFn::exp();
  if (kind == "scale") return NamedFn::scale(num(j, "c"));
  bad("unknown function kind '" + kind + "'");
}

Json to_json(const ConvexSpec& phi) {
  using K = ConvexSpec::Kind;
  switch (phi.kind()) {
    case K::Square: return {{"kind", "square"}};
    case K::Power: return {{"kind", "power"}, {"a", phi.param()}};
    case K::Patton: return {{"kind", "patton"}, {"b", phi.param()}};
    case K::BoundedRational: return {{"kind", "bounded-rational"}};
    case K::NegativeLog: return {{"kind", "negative-log"}};
    case K::Reciprocal: return {{"kind", "reciprocal"}};
    case K::CustomGrid:
      return {{"kind", "custom-grid"}, {"lo", phi.grid_lo()}, {"hi", phi.grid_hi()}, {"values", phi.grid_values()}};
  }
  return {};
}

ConvexSpec convex_from_json(const Json& j) {
  const std::string kind = str(j, "kind");
  if (kind == "square") return ConvexSpec::square();
  if (kind == "power") return ConvexSpec::power(num(j, "a"));
  if (kind == "patton") return ConvexSpec::patton(num(j, "b"));
  if (kind == "bounded-rational") return ConvexSpec::bounded_rational();
  if (kind == "negative-log") return ConvexSpec::negative_log();
  if (kind == "reciprocal") return ConvexSpec::reciprocal();
  if (kind == "custom-grid") return ConvexSpec::custom_grid(num(j, "lo"), num(j, "hi"), vec(j, "values"));
  bad("unknown convex function kind '" + kind + "'");
}

Json to_json(const MonotoneSpec& g) {
  using K = MonotoneSpec::Kind;
  switch (g.kind()) {
    case K::Identity: return {{"kind", "identity"}};
    case K::Log: return {{"kind", "log"}};
    case K::Power: return {{"kind", "power"}, {"b", g.param()}};
    case K::Logistic: return {{"kind", "logistic"}};
    case K::CustomGrid:
      return {{"kind", "custom-grid"}, {"lo", g.grid_lo()}, {"hi", g.grid_hi()}, {"values", g.grid_values()}};
  }
  return {};
}

MonotoneSpec monotone_from_json(const Json& j) {
  const std::string kind = str(j, "kind");
  if (kind == "identity") return MonotoneSpec::identity();
  if (kind == "log") return MonotoneSpec::log();
  if (kind == "power") return MonotoneSpec::power(num(j, "b"));
  if (kind == "logistic") return MonotoneSpec::logistic();
  if (kind == "custom-grid") return MonotoneSpec::custom_grid(num(j, "lo"), num(j, "hi"), vec(j, "values"));
  bad("unknown monotone function kind '" + kind + "'");
}

Json to_json(const Bijection& g) { return {{"forward", to_json(g.forward_fn())}, {"inverse", to_json(g.inverse_fn())}}; }

Bijection bijection_from_json(const Json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "identity") return Bijection::identity();
    if (name == "log") return Bijection::log();
    if (name == "exp") return Bijection::exp();
    bad("unknown bijection '" + name + "'");
  }
  return {named_fn_from_json(field(j, "forward")), named_fn_from_json(field(j, "inverse"))};
}

// ---------------------------------------------------------------------------
// Scores

Json to_json(const ScoringFunction& s) {
  using SF = ScoringFunction;
  Json j;
  j["family"] = s.family();
  std::visit(Overloaded{
                 [&](const SF::BetaMedianScore& v) { j["beta"] = v.beta; },
                 [&](const SF::Bregman& v) { j["phi"] = to_json(v.phi); },
                 [&](const SF::PowerBregman& v) { j["a"] = v.a; },
                 [&](const SF::Patton& v) { j["b"] = v.b; },
                 [&](const SF::Pinball& v) { j["alpha"] = v.alpha; },
                 [&](const SF::GPL& v) {
                   j["alpha"] = v.alpha;
                   j["g"] = to_json(v.g);
                 },
                 [&](const SF::GPLPower& v) {
                   j["alpha"] = v.alpha;
                   j["b"] = v.b;
                 },
                 [&](const SF::AsymQuadratic& v) { j["tau"] = v.tau; },
                 [&](const SF::ExpectileBregman& v) {
                   j["tau"] = v.tau;
                   j["phi"] = to_json(v.phi);
                 },
                 [&](const SF::RatioBregman& v) {
                   j["phi"] = to_json(v.phi);
                   j["r"] = to_json(v.r);
                   j["s"] = to_json(v.s);
                   if (s.observation_domain().lo >= 0.0) j["observations"] = "positive";
                 },
                 [&](const SF::ZeroOne& v) { j["c"] = v.c; },
                 [&](const SF::Survival& v) { j["k"] = v.k; },
                 [&](const SF::Weighted& v) {
                   j["base"] = to_json(*v.base);
                   j["w"] = to_json(v.w.fn());
                 },
                 [&](const SF::Revealed& v) {
                   j["base"] = to_json(*v.base);
                   j["g"] = to_json(v.g);
                 },
                 [&](const SF::Mixture& v) {
                   Json parts = Json::array();
                   for (const auto& c : v.components) parts.push_back({{"score", to_json(*c.score)}, {"weight", c.weight}});
                   j["components"] = parts;
                 },
                 [&](const SF::Custom& v) {
                   fail(ErrorCode::Unsupported, "custom score '" + v.label + "' is not serializable");
                 },
                 [](const auto&) {},
             },
             s.variant());
  return j;
}

ScoringFunction score_from_json(const Json& j) {
  const std::string f = str(j, "family");
  if (f == "se") return ScoringFunction::se();
  if (f == "ae") return ScoringFunction::ae();
  if (f == "ape") return ScoringFunction::ape();
  if (f == "re") return ScoringFunction::re();
  if (f == "beta-median") return ScoringFunction::beta_median(num(j, "beta"));
  if (f == "bregman") return ScoringFunction::bregman(convex_from_json(field(j, "phi")));
  if (f == "power-bregman") return ScoringFunction::power_bregman(num(j, "a"));
  if (f == "patton") return ScoringFunction::patton(num(j, "b"));
  if (f == "pinball") return ScoringFunction::pinball(num(j, "alpha"));
  if (f == "gpl") return ScoringFunction::gpl(num(j, "alpha"), monotone_from_json(field(j, "g")));
  if (f == "gpl-power") return ScoringFunction::gpl_power(num(j, "alpha"), num(j, "b"));
  if (f == "asym-quadratic") return ScoringFunction::asym_quadratic(num(j, "tau"));
  if (f == "expectile-bregman") return ScoringFunction::expectile_bregman(num(j, "tau"), convex_from_json(field(j, "phi")));
  if (f == "ratio-bregman") {
    std::optional<Interval> observations;
    if (j.contains("observations")) {
      const std::string which = str(j, "observations");
      if (which == "positive") observations = Interval::positive();
      else if (which != "real") bad("'observations' must be \"positive\" or \"real\"");
    }
    return ScoringFunction::ratio_bregman(convex_from_json(field(j, "phi")), named_fn_from_json(field(j, "r")),
                                          named_fn_from_json(field(j, "s")), observations);
  }
  if (f == "squared-relative-error") return ScoringFunction::squared_relative_error();
  if (f == "obs-weighted-se") return ScoringFunction::obs_weighted_se();
  if (f == "zero-one") return ScoringFunction::zero_one(num(j, "c"));
  if (f == "survival") return ScoringFunction::survival(num(j, "k"));
  if (f == "weighted") return weighted_score(score_from_json(field(j, "base")), WeightFn(named_fn_from_json(field(j, "w"))));
  if (f == "revelation") return revelation_transform(score_from_json(field(j, "base")), bijection_from_json(field(j, "g")));
  if (f == "mixture") {
    const Json& parts = field(j, "components");
    if (!parts.is_array()) bad("mixture components must be an array");
    std::vector<std::pair<ScoringFunction, double>> components;
    for (const auto& p : parts) components.emplace_back(score_from_json(field(p, "score")), num(p, "weight"));
    return mixture_score(components);
  }
  bad("unknown score family '" + f + "'");
}

// ---------------------------------------------------------------------------
// Functionals

Json to_json(const Functional& t) {
  using F = Functional;
  return std::visit(
      Overloaded{
          [](const F::Mean&) -> Json { return {{"kind", "mean"}}; },
          [](const F::Quantile& q) -> Json { return {{"kind", "quantile"}, {"alpha", q.alpha}}; },
          [](const F::Expectile& e) -> Json { return {{"kind", "expectile"}, {"tau", e.tau}}; },
          [](const F::BetaMedian& b) -> Json { return {{"kind", "beta-median"}, {"beta", b.beta}}; },
          [](const F::Ratio& r) -> Json { return {{"kind", "ratio"}, {"r", to_json(r.r)}, {"s", to_json(r.s)}}; },
          [](const F::CVaR& c) -> Json { return {{"kind", "cvar"}, {"alpha", c.alpha}}; },
          [](const F::ModalMidpoint& m) -> Json { return {{"kind", "modal-midpoint"}, {"c", m.c}}; },
          [](const F::Weighted& w) -> Json {
            return {{"kind", "weighted"}, {"inner", to_json(*w.inner)}, {"w", to_json(w.w.fn())}};
          },
          [](const F::Transformed& t) -> Json {
            return {{"kind", "transformed"}, {"inner", to_json(*t.inner)}, {"g", to_json(t.g)}};
          },
          [](const F::Conjugated& c) -> Json {
            return {{"kind", "conjugated"}, {"inner", to_json(*c.inner)}, {"h", to_json(c.h)}};
          },
      },
      t.variant());
}

Functional functional_from_json(const Json& j) {
  const std::string kind = str(j, "kind");
  if (kind == "mean") return Functional::mean();
  if (kind == "median") return Functional::median();
  if (kind == "quantile") return Functional::quantile(num(j, "alpha"));
  if (kind == "expectile") return Functional::expectile(num(j, "tau"));
  if (kind == "beta-median") return Functional::beta_median(num(j, "beta"));
  if (kind == "ratio") return Functional::ratio(named_fn_from_json(field(j, "r")), named_fn_from_json(field(j, "s")));
  if (kind == "cvar") return Functional::cvar(num(j, "alpha"));
  if (kind == "modal-midpoint") return Functional::modal_midpoint(num(j, "c"));
  if (kind == "weighted")
    return Functional::weighted(functional_from_json(field(j, "inner")), WeightFn(named_fn_from_json(field(j, "w"))));
  if (kind == "transformed")
    return Functional::transformed(functional_from_json(field(j, "inner")), bijection_from_json(field(j, "g")));
  if (kind == "conjugated")
    return Functional::conjugated(functional_from_json(field(j, "inner")), bijection_from_json(field(j, "h")));
  bad("unknown functional kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Results

Json to_json(const FunctionalValue& v) {
  Json j{{"representative", number(v.representative)}, {"set_lo", number(v.set_lo)}, {"set_hi", number(v.set_hi)}};
  if (!v.components.empty()) {
    Json parts = Json::array();
    for (const auto& c : v.components) parts.push_back({number(c.lo), number(c.hi)});
    j["components"] = parts;
  }
  return j;
}

Json to_json(const BayesSolution& b) {
  return {{"argmin_representative", number(b.representative)},
          {"argmin_lo", number(b.lo)},
          {"argmin_hi", number(b.hi)},
          {"expected_score_at_min", number(b.expected_score)},
          {"method", to_string(b.method)},
          {"outcome", to_string(b.outcome)}};
}

Json to_json(const ConsistencyReport& r) {
  return {{"trials", r.trials},
          {"max_violation", number(r.max_violation)},
          {"tolerance", number(r.tolerance)},
          {"worst_case", r.worst_case},
          {"verdict", r.pass ? "pass" : "fail"}};
}

Json to_json(const ConvexityReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back({{"p", number(v.p)}, {"distance", number(v.distance)}});
  return {{"functional", r.functional},
          {"applicable", r.applicable},
          {"shared_value", number(r.shared_value)},
          {"p_grid", numbers(r.p_grid)},
          {"violations", violations},
          {"max_distance", number(r.max_distance)},
          {"verdict", !r.applicable ? "not-applicable" : (r.convex() ? "convex" : "violation")}};
}

Json to_json(const CvarCounterexample& r) {
  return {{"f1", to_json(r.f1)},
          {"f2", to_json(r.f2)},
          {"cvar_f1", number(r.cvar_f1)},
          {"cvar_f2", number(r.cvar_f2)},
          {"cvar_mixture", number(r.cvar_mixture)},
          {"shared_formula", number(r.shared_formula)},
          {"mixture_formula", number(r.mixture_formula)},
          {"formulas_match", r.formulas_match},
          {"strict", r.strict}};
}

Json to_json(const OsbandReport& r) {
  return {{"x", numbers(r.x)}, {"h", numbers(r.h)}, {"spread", numbers(r.spread)}, {"max_spread", number(r.max_spread)}};
}

Json to_json(const ProprietyReport& r) {
  return {{"trials", r.trials},
          {"max_violation", number(r.max_violation)},
          {"tolerance", number(r.tolerance)},
          {"worst_case", r.worst_case},
          {"verdict", r.pass ? "pass" : "fail"}};
}

Json to_json(const EvaluationReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"score", c.score},
                     {"forecaster", c.forecaster},
                     {"mean_score", number(c.mean)},
                     {"stderr", number(c.std_error)},
                     {"n", c.n},
                     {"skipped", c.skipped}});
  }
  Json rankings = Json::object();
  for (std::size_t i = 0; i < r.scores.size(); ++i) rankings[r.scores[i]] = r.rankings[i];
  return {{"n", r.n},         {"seed", r.seed},           {"epsilon", number(r.epsilon)}, {"scores", r.scores},
          {"forecasters", r.forecasters}, {"cells", cells}, {"rankings", rankings},        {"notes", r.notes}};
}

// ---------------------------------------------------------------------------
// Path CSV

void write_path_csv(std::ostream& out, const ForecastPath& path) {
  out << "t,sigma2,z,y,statistician,optimist,pessimist\n";
  for (std::size_t t = 0; t < path.size(); ++t) {
    out << t << ',' << format_exact(path.sigma2[t]) << ',' << format_exact(path.z[t]) << ',' << format_exact(path.y[t])
        << ',' << format_exact(path.sigma2[t]) << ",5,0.05\n";
  }
}

ForecastPath read_path_csv(std::istream& in) {
  ForecastPath path;
  std::string line;
  std::vector<std::string> header;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };
  int col_sigma2 = -1, col_z = -1, col_y = -1;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("seed=");
      if (pos != std::string::npos) path.seed = std::stoull(line.substr(pos + 5));
      continue;
    }
    const auto parts = split(line);
    if (header.empty()) {
      header = parts;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "sigma2") col_sigma2 = static_cast<int>(i);
        if (header[i] == "z") col_z = static_cast<int>(i);
        if (header[i] == "y") col_y = static_cast<int>(i);
      }
      if (col_sigma2 < 0 || col_y < 0) bad("path CSV needs sigma2 and y columns");
      continue;
    }
    if (parts.size() != header.size()) bad("path CSV line " + std::to_string(line_no) + " has the wrong column count");
    path.sigma2.push_back(parse_number(parts[static_cast<std::size_t>(col_sigma2)]));
    path.y.push_back(parse_number(parts[static_cast<std::size_t>(col_y)]));
    path.z.push_back(col_z >= 0 ? parse_number(parts[static_cast<std::size_t>(col_z)]) : std::sqrt(path.y.back()));
  }
  if (path.y.empty()) bad("path CSV has no data rows");
  return path;
}

}  // namespace scorelab::io
