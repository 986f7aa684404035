#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "scorelab/functionals.hpp"
#include "scorelab/lab.hpp"
#include "scorelab/measures.hpp"
#include "scorelab/optimal.hpp"
#include "scorelab/scoring.hpp"
#include "scorelab/simstudy.hpp"

namespace scorelab::io {

using Json = nlohmann::ordered_json;

/// Finite values rounded to ten significant digits; infinities and NaN as strings.
Json number(double v);

/// Readers throw ParseError on malformed or incomplete descriptors.
Json to_json(const Distribution& dist);
Distribution distribution_from_json(const Json& j);

Json to_json(const NamedFn& fn);
NamedFn named_fn_from_json(const Json& j);

Json to_json(const ConvexSpec& phi);
ConvexSpec convex_from_json(const Json& j);

Json to_json(const MonotoneSpec& g);
MonotoneSpec monotone_from_json(const Json& j);

Json to_json(const Bijection& g);
Bijection bijection_from_json(const Json& j);

/// Throws Unsupported for custom scores.
Json to_json(const ScoringFunction& s);
ScoringFunction score_from_json(const Json& j);

Json to_json(const Functional& t);
Functional functional_from_json(const Json& j);

Json to_json(const FunctionalValue& v);
Json to_json(const BayesSolution& b);
Json to_json(const ConsistencyReport& r);
Json to_json(const ConvexityReport& r);
Json to_json(const CvarCounterexample& r);
Json to_json(const OsbandReport& r);
Json to_json(const ProprietyReport& r);
Json to_json(const EvaluationReport& r);

/// Parses JSON text, mapping syntax errors to ParseError.
Json parse(const std::string& text);

/// CSV with columns t,sigma2,z,y,statistician,optimist,pessimist. Values are
/// written in shortest round-trip form so that a path read back is identical.
void write_path_csv(std::ostream& out, const ForecastPath& path);
/// Reads the sigma2, z and y columns by header name; '#' lines are skipped.
ForecastPath read_path_csv(std::istream& in);

}  // namespace scorelab::io
