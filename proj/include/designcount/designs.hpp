#pragma once

// Steiner triple systems, 1-factorizations of K_n and Latin squares.
//
// Vertices are labeled 1..n, colors 1..n-1, Latin symbols 1..n. All three
// types are immutable once constructed through their validators.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace designcount {

enum class DesignKind { Steiner, OneFactorization, Latin };

std::string_view kind_name(DesignKind kind);

using Triple = std::array<int, 3>;

/// Unordered pair key, canonicalized as (min, max).
struct Edge {
  int u;
  int v;
  static Edge of(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Row-major n x n table over labels 1..n, slot 0 unused on each axis.
class PairTable {
 public:
  PairTable() = default;
  explicit PairTable(int n) : n_(n), cells_(static_cast<std::size_t>(n + 1) * (n + 1), 0) {}

  int at(int i, int j) const { return cells_[index(i, j)]; }
  void set_symmetric(int i, int j, int value) {
    cells_[index(i, j)] = value;
    cells_[index(j, i)] = value;
  }
  int order() const { return n_; }
  friend bool operator==(const PairTable&, const PairTable&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * (n_ + 1) + static_cast<std::size_t>(j);
  }
  int n_ = 0;
  std::vector<int> cells_;
};

class TripleSystem {
 public:
  int order() const { return n_; }
  /// Sorted triples, each sorted ascending.
  std::span<const Triple> triples() const { return triples_; }
  /// The third point of the unique triple through {i, j}.
  int third(int i, int j) const;
  friend bool operator==(const TripleSystem&, const TripleSystem&) = default;

 private:
  friend TripleSystem validate_triple_system(int n, std::span<const Triple> triples);
  int n_ = 0;
  std::vector<Triple> triples_;
  PairTable third_;
};

/// A colored edge {u, v} with u < v.
struct ColoredEdge {
  int u;
  int v;
  int color;
  friend bool operator==(const ColoredEdge&, const ColoredEdge&) = default;
};

class EdgeColoring {
 public:
  int order() const { return n_; }
  int colors() const { return n_ - 1; }
  int color(int i, int j) const;
  /// All edges in lexicographic (u, v) order.
  std::vector<ColoredEdge> edges() const;
  friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;

 private:
  friend EdgeColoring validate_edge_coloring(int n, std::span<const ColoredEdge> edges);
  int n_ = 0;
  PairTable color_;
};

class LatinSquare {
 public:
  int order() const { return n_; }
  int at(int row, int col) const {
    return cells_[static_cast<std::size_t>(row - 1) * n_ + (col - 1)];
  }
  std::vector<std::vector<int>> rows() const;
  friend bool operator==(const LatinSquare&, const LatinSquare&) = default;

 private:
  friend LatinSquare make_latin_square(const std::vector<std::vector<int>>& rows);
  int n_ = 0;
  std::vector<int> cells_;
};

TripleSystem validate_triple_system(int n, std::span<const Triple> triples);

EdgeColoring validate_edge_coloring(int n, std::span<const ColoredEdge> edges);

/// Throws NotLatin when `rows` is not a Latin square over 1..n.
LatinSquare make_latin_square(const std::vector<std::vector<int>>& rows);

/// X_{i,j} for a Steiner triple system. Throws SameVertex when i == j.
int third_point(const TripleSystem& ts, int i, int j);

// L(i,j) = color(i,j) off the diagonal, L(i,i) = n.
LatinSquare to_latin_cube(const EdgeColoring& coloring);
// L(i,j) = third(i,j) off the diagonal, L(i,i) = i.
LatinSquare to_latin_cube(const TripleSystem& ts);

bool is_latin(const std::vector<std::vector<int>>& rows);

inline bool sts_feasible(int n) { return n >= 1 && (n % 6 == 1 || n % 6 == 3); }
inline bool one_factorization_feasible(int n) { return n >= 2 && n % 2 == 0; }

}  // namespace designcount
