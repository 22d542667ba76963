#pragma once

#include "symcap/geometry.hpp"
#include "symcap/loops.hpp"

#include <json.hpp>

#include <string>

namespace symcap {

using Json = nlohmann::json;

/// Shortest round-trip decimal form; identical inputs give identical text.
std::string format_double(double v);

/// Reads a JSON document, mapping syntax errors to SpecParseError with line and column.
/// An empty (or whitespace-only) file yields a null document.
Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text);

/// {"kind": "ellipsoid"|"lp"|"polytope_v"|"polytope_h", "dim": d, "params": {...}}
///   ellipsoid:  "matrix" (row-major, nested or flat) | "axes" (per coordinate)
///               | "radii" (per complex line); optional "center"
///   lp:         "p" (number or "inf"), optional "weights"
///   polytope_v: "vertices": [[...], ...]
///   polytope_h: "normals": [[...], ...], "offsets": [...]
ConvexBody body_from_json(const Json& spec);
Json body_to_json(const ConvexBody& body);

/// {"dim": d, "vertices": [[...], ...]}
DiscreteLoop loop_from_json(const Json& spec);
Json loop_to_json(const DiscreteLoop& loop);

Json vector_to_json(const VecRef& v);
Vec vector_from_json(const Json& j);

}  // namespace symcap
