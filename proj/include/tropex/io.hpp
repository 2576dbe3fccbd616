#pragma once

#include "tropex/atlas.hpp"
#include "tropex/polytope.hpp"
#include "tropex/rational.hpp"
#include "tropex/refinement.hpp"
#include "tropex/tropical_curves.hpp"

#include <json.hpp>

#include <string>

namespace tropex::io {

// Outputs keep insertion order so emitted documents are byte-stable:
// loading an emitted document and emitting it again reproduces it exactly.
using json = nlohmann::ordered_json;

// Every numeric value on the wire is a string: integers in decimal,
// rationals as "p/q" (or "p" when the denominator is one). The single
// exception are the angular coordinates of points, the only floating data,
// which are emitted with 17 significant digits. Readers also accept plain
// JSON integers and normalize them on the next emission.

json to_json(const Int& v);
json to_json(const Rat& v);
json to_json(const VecI& v);
json to_json(const VecQ& v);
json to_json(const IntMat& m);
json to_json(const IntAffineMap& f);
json to_json(const AffCondition& c);
json to_json(const Polytope& p);
json to_json(const Atlas& a);
json to_json(const TropicalComplex& c);
json to_json(const AtlasMorphism& f);
json to_json(const CurveType& t);
json to_json(const Subdivision& s);
json to_json(const ExplodedPoint& p);

// Readers throw invalid_input_error naming the offending location. `at` is
// the location prefix used in messages, defaulted to the value's type.
Int int_from_json(const json& j, const std::string& at = "integer");
Rat rat_from_json(const json& j, const std::string& at = "rational");
VecI veci_from_json(const json& j, const std::string& at = "vector");
VecQ vecq_from_json(const json& j, const std::string& at = "vector");
IntMat mat_from_json(const json& j, const std::string& at = "matrix");
IntAffineMap map_from_json(const json& j, const std::string& at = "map");
Polytope polytope_from_json(const json& j, const std::string& at = "polytope");
Atlas atlas_from_json(const json& j, const std::string& at = "atlas");
TropicalComplex complex_from_json(const json& j,
                                  const std::string& at = "complex");
AtlasMorphism morphism_from_json(const json& j,
                                 const std::string& at = "morphism");
CurveType curve_type_from_json(const json& j, const std::string& at = "type");
Subdivision subdivision_from_json(const json& j,
                                  const std::string& at = "subdivision");
ExplodedPoint point_from_json(const json& j, const std::string& at = "point");

// Parses a file; unreadable files and malformed JSON (with the parser's
// position diagnostics) throw invalid_input_error.
json load_file(const std::string& path);
json parse(const std::string& text, const std::string& at = "input");

// Canonical emission: two-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace tropex::io
