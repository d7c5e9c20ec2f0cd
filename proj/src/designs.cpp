#include "designcount/designs.hpp"

#include <algorithm>
#include <string>

#include "designcount/errors.hpp"

namespace designcount {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::DuplicatePair: return "DuplicatePair";
    case ErrorCode::UncoveredPair: return "UncoveredPair";
    case ErrorCode::BadVertex: return "BadVertex";
    case ErrorCode::ColorClash: return "ColorClash";
    case ErrorCode::MissingEdge: return "MissingEdge";
    case ErrorCode::BadColor: return "BadColor";
    case ErrorCode::SameVertex: return "SameVertex";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::NotLatin: return "NotLatin";
    case ErrorCode::PoolTooLarge: return "PoolTooLarge";
    case ErrorCode::EmptyPool: return "EmptyPool";
    case ErrorCode::ZeroDegree: return "ZeroDegree";
    case ErrorCode::OddN: return "OddN";
    case ErrorCode::NotDivisibleBy4: return "NotDivisibleBy4";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::UnknownBound: return "UnknownBound";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyCondition: return "EmptyCondition";
    case ErrorCode::CacheMismatch: return "CacheMismatch";
  }
  return "Unknown";
}

std::string_view kind_name(DesignKind kind) {
  switch (kind) {
    case DesignKind::Steiner: return "sts";
    case DesignKind::OneFactorization: return "1f";
    case DesignKind::Latin: return "latin";
  }
  return "?";
}

namespace {

std::string pair_text(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

void check_vertex(int n, int v) {
  if (v < 1 || v > n)
    throw Error(ErrorCode::BadVertex, "vertex " + std::to_string(v) + " outside 1.." + std::to_string(n));
}

}  // namespace

int TripleSystem::third(int i, int j) const { return third_.at(i, j); }

TripleSystem validate_triple_system(int n, std::span<const Triple> triples) {
  if (n < 1) throw Error(ErrorCode::BadInput, "order must be positive");
  TripleSystem ts;
  ts.n_ = n;
  ts.third_ = PairTable(n);
  for (const Triple& raw : triples) {
    Triple t = raw;
    for (int v : t) check_vertex(n, v);
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2])
      throw Error(ErrorCode::BadInput, "triple with a repeated point");
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        if (ts.third_.at(t[a], t[b]) != 0)
          throw Error(ErrorCode::DuplicatePair, pair_text(t[a], t[b]));
        ts.third_.set_symmetric(t[a], t[b], t[3 - a - b]);
      }
    }
    ts.triples_.push_back(t);
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (ts.third_.at(i, j) == 0) throw Error(ErrorCode::UncoveredPair, pair_text(i, j));
  std::sort(ts.triples_.begin(), ts.triples_.end());
  return ts;
}

int third_point(const TripleSystem& ts, int i, int j) {
  check_vertex(ts.order(), i);
  check_vertex(ts.order(), j);
  if (i == j) throw Error(ErrorCode::SameVertex, pair_text(i, j));
  return ts.third(i, j);
}

int EdgeColoring::color(int i, int j) const { return color_.at(i, j); }

std::vector<ColoredEdge> EdgeColoring::edges() const {
  std::vector<ColoredEdge> out;
  out.reserve(static_cast<std::size_t>(n_) * (n_ - 1) / 2);
  for (int u = 1; u <= n_; ++u)
    for (int v = u + 1; v <= n_; ++v) out.push_back({u, v, color_.at(u, v)});
  return out;
}

EdgeColoring validate_edge_coloring(int n, std::span<const ColoredEdge> edges) {
  if (n < 1) throw Error(ErrorCode::BadInput, "order must be positive");
  EdgeColoring ec;
  ec.n_ = n;
  ec.color_ = PairTable(n);
  // used[v * n + c] marks color c as present at vertex v.
  std::vector<bool> used(static_cast<std::size_t>(n + 1) * n, false);
  for (const ColoredEdge& e : edges) {
    check_vertex(n, e.u);
    check_vertex(n, e.v);
    if (e.u == e.v) throw Error(ErrorCode::SameVertex, pair_text(e.u, e.v));
    if (e.color < 1 || e.color > n - 1)
      throw Error(ErrorCode::BadColor, "color " + std::to_string(e.color) + " on edge " + pair_text(e.u, e.v));
    if (ec.color_.at(e.u, e.v) != 0)
      throw Error(ErrorCode::BadInput, "edge " + pair_text(e.u, e.v) + " listed twice");
    for (int end : {e.u, e.v}) {
      auto slot = used[static_cast<std::size_t>(end) * n + e.color];
      if (slot)
        throw Error(ErrorCode::ColorClash, "vertex " + std::to_string(end) + " color " + std::to_string(e.color));
      slot = true;
    }
    ec.color_.set_symmetric(e.u, e.v, e.color);
  }
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v)
      if (ec.color_.at(u, v) == 0) throw Error(ErrorCode::MissingEdge, pair_text(u, v));
  if (n % 2 != 0) throw Error(ErrorCode::BadOrder, "1-factorizations need even n");
  return ec;
}

std::vector<std::vector<int>> LatinSquare::rows() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n_));
  for (int r = 1; r <= n_; ++r)
    for (int c = 1; c <= n_; ++c) out[r - 1].push_back(at(r, c));
  return out;
}

bool is_latin(const std::vector<std::vector<int>>& rows) {
  const auto n = rows.size();
  for (const auto& row : rows)
    if (row.size() != n) return false;
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<bool> in_row(n + 1, false), in_col(n + 1, false);
    for (std::size_t b = 0; b < n; ++b) {
      const int x = rows[a][b];
      const int y = rows[b][a];
      if (x < 1 || static_cast<std::size_t>(x) > n || in_row[x]) return false;
      if (y < 1 || static_cast<std::size_t>(y) > n || in_col[y]) return false;
      in_row[x] = in_col[y] = true;
    }
  }
  return true;
}

LatinSquare make_latin_square(const std::vector<std::vector<int>>& rows) {
  if (!is_latin(rows)) throw Error(ErrorCode::NotLatin, "rows do not form a Latin square");
  LatinSquare sq;
  sq.n_ = static_cast<int>(rows.size());
  for (const auto& row : rows) sq.cells_.insert(sq.cells_.end(), row.begin(), row.end());
  return sq;
}

LatinSquare to_latin_cube(const EdgeColoring& coloring) {
  const int n = coloring.order();
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) rows[i - 1][j - 1] = i == j ? n : coloring.color(i, j);
  return make_latin_square(rows);
}

LatinSquare to_latin_cube(const TripleSystem& ts) {
  const int n = ts.order();
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) rows[i - 1][j - 1] = i == j ? i : ts.third(i, j);
  return make_latin_square(rows);
}

}  // namespace designcount
