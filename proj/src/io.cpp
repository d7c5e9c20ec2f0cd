#include "designcount/io.hpp"

#include <istream>

#include "designcount/errors.hpp"

namespace designcount {

Json to_json(const TripleSystem& ts) {
  Json j;
  j["kind"] = "sts";
  j["n"] = ts.order();
  j["triples"] = Json::array();
  for (const Triple& t : ts.triples()) j["triples"].push_back({t[0], t[1], t[2]});
  return j;
}

Json to_json(const EdgeColoring& coloring) {
  Json j;
  j["kind"] = "1f";
  j["n"] = coloring.order();
  j["colors"] = Json::array();
  for (const ColoredEdge& e : coloring.edges()) j["colors"].push_back({e.u, e.v, e.color});
  return j;
}

Json to_json(const LatinSquare& square) {
  Json j;
  j["kind"] = "latin";
  j["n"] = square.order();
  j["rows"] = square.rows();
  return j;
}

Json to_json(const Design& design) {
  return std::visit([](const auto& d) { return to_json(d); }, design);
}

Design design_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("n").get<int>();
    if (kind == "sts") {
      std::vector<Triple> triples;
      for (const auto& t : j.at("triples")) {
        if (t.size() != 3) throw Error(ErrorCode::BadInput, "triples must have three points");
        triples.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
      }
      return validate_triple_system(n, triples);
    }
    if (kind == "1f") {
      std::vector<ColoredEdge> edges;
      for (const auto& e : j.at("colors")) {
        if (e.size() != 3) throw Error(ErrorCode::BadInput, "color entries are [i, j, c]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>()});
      }
      return validate_edge_coloring(n, edges);
    }
    if (kind == "latin") {
      auto rows = j.at("rows").get<std::vector<std::vector<int>>>();
      if (rows.size() != static_cast<std::size_t>(n)) throw Error(ErrorCode::BadInput, "row count differs from n");
      return make_latin_square(rows);
    }
    throw Error(ErrorCode::BadInput, "unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

Design parse_design(const std::string& text) {
  try {
    return design_from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadInput, e.what());
  }
}

std::vector<Design> read_jsonl(std::istream& in) {
  std::vector<Design> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_design(line));
  }
  return out;
}

}  // namespace designcount
