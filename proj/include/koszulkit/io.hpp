#pragma once

#include "koszulkit/banded.hpp"
#include "koszulkit/koszul.hpp"
#include "koszulkit/spectrum.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace koszulkit {

using json = nlohmann::json;

/// [re, im] with each part a "p/q" string (exact) or a number (float).
Scalar scalar_from_json(const json& j);
/// Exact parts are written as strings, float parts as numbers.
json scalar_to_json(const Scalar& s);
/// Exact value regardless of how it was written; numbers are read as the
/// exact rational value of the double.
GaussRational exact_from_json(const json& j);
json exact_to_json(const GaussRational& v);

/// {"rows": r, "cols": c, "entries": [[re, im], ...]} in row-major order.
Mat mat_from_json(const json& j);
json mat_to_json(const Mat& m);

/// {"mode": "exact"|"float", "matrices": [Mat, ...]}; `mode` overrides the file.
/// A negative tol_comm selects the default commutator tolerance.
CommutingTuple tuple_from_json(const json& j, std::optional<Mode> mode = std::nullopt, double tol_comm = -1.0);
json tuple_to_json(const CommutingTuple& t);

/// List of polynomials, each a list of {"coeff": [re, im], "monomial": [k_1, ..., k_n]}.
PolyMap polymap_from_json(const json& j);
json polymap_to_json(const PolyMap& f);

/// Univariate polynomial as a coefficient list (lowest degree first), exact.
Poly poly_from_json(const json& j);
json poly_to_json(const Poly& p);

/// {"bandwidth": w, "diagonals": [{"offset": k, "prefix": [...], "period": [...],
///  "terms": [{"period": [...], "num": [...], "den": [...]}]}], "patch": Mat?, "fredholm": bool?}
/// A period repeats starting right after the prefix. `terms` multiply their
/// period by num(t)/den(t), t the position along the diagonal.
/// Also accepts {"catalog": kind, ...} for the named catalog operators.
BandedOperator operator_from_json(const json& j);
json operator_to_json(const BandedOperator& op);

json read_json_file(const std::string& path);

/// Sorted keys, two-space indent, floats as %.12g, trailing newline.
std::string stable_dump(const json& j);

} // namespace koszulkit
