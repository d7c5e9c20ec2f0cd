#pragma once

// JSON interchange formats:
//   {"kind":"sts","n":7,"triples":[[1,2,3],...]}
//   {"kind":"1f","n":6,"colors":[[i,j,c],...]}      with i < j
//   {"kind":"latin","n":4,"rows":[[...],...]}
// Pools are JSON-lines files with one object per line.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "designcount/designs.hpp"

namespace designcount {

using Json = nlohmann::ordered_json;
using Design = std::variant<TripleSystem, EdgeColoring, LatinSquare>;

Json to_json(const TripleSystem& ts);
Json to_json(const EdgeColoring& coloring);
Json to_json(const LatinSquare& square);
Json to_json(const Design& design);

/// Parses and validates one object. Malformed documents raise BadInput;
/// well-formed but invalid designs raise the validator's error.
Design design_from_json(const Json& j);
Design parse_design(const std::string& text);

template <typename T>
void write_jsonl(std::ostream& out, const std::vector<T>& items) {
  for (const auto& item : items) out << to_json(item).dump() << '\n';
}

std::vector<Design> read_jsonl(std::istream& in);

}  // namespace designcount
