#pragma once

// Exact backtracking counters and enumerators.
//
// Every search extends the least open position (smallest uncovered pair for
// triple systems, smallest uncolored edge for factorizations, next cell in
// row-major order for Latin squares). The tree is split at a fixed depth and
// the subtrees are handed to workers; per-subtree totals are summed in
// subtree order, so results never depend on the worker count.

#include <cstdint>
#include <optional>
#include <vector>

#include "designcount/designs.hpp"
#include "designcount/errors.hpp"
#include "designcount/numeric.hpp"
#include "designcount/rng.hpp"

namespace designcount {

struct SearchConfig {
  int jobs = 1;
  std::optional<std::uint64_t> node_budget;
  /// Depth at which the tree is cut into parallel subtrees; defaults to the
  /// first open vertex's star (first row for Latin squares).
  std::optional<int> split_depth;
  /// Optional relabeling: internal vertex r is reported as vertex_priority[r].
  /// Changes which pair counts as "least", not the count.
  std::vector<int> vertex_priority;
};

struct CountResult {
  DesignKind kind = DesignKind::Steiner;
  int n = 0;
  BigInt count = 0;
  bool labeled = false;
  /// False when the node budget ran out; `count` is then a partial tally.
  bool complete = true;
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

CountResult count_triple_systems(int n, const SearchConfig& config = {});
CountResult count_one_factorizations(int n, bool labeled, const SearchConfig& config = {});
CountResult count_latin_squares(int n, const SearchConfig& config = {});

template <typename T>
struct Pool {
  int n = 0;
  std::vector<T> items;
  bool complete = true;
};

// Pool size limits: the largest orders whose pools fit comfortably in memory.
inline constexpr int kMaxStsPoolOrder = 9;
inline constexpr int kMaxLabeledPoolOrder = 6;
inline constexpr int kMaxNormalizedPoolOrder = 8;
inline constexpr int kMaxLatinPoolOrder = 5;

Pool<TripleSystem> enumerate_triple_systems(int n, const SearchConfig& config = {});

/// labeled: every proper (n-1)-edge-coloring. Otherwise one representative
/// per unordered factorization, colored so that edge {1, v} has color v - 1.
Pool<EdgeColoring> enumerate_one_factorizations(int n, bool labeled, const SearchConfig& config = {});

Pool<LatinSquare> enumerate_latin_squares(int n, const SearchConfig& config = {});

/// Indices of `count` independent uniform draws from a pool of `pool_size`.
std::vector<std::size_t> sample_indices(std::size_t pool_size, std::uint64_t seed, std::size_t count);

template <typename T>
std::vector<T> sample_uniform(const Pool<T>& pool, std::uint64_t seed, std::size_t count) {
  if (pool.items.empty()) throw Error(ErrorCode::EmptyPool, "cannot sample from an empty pool");
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t idx : sample_indices(pool.items.size(), seed, count)) out.push_back(pool.items[idx]);
  return out;
}

}  // namespace designcount
