#include "designcount/enumeration.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <numeric>
#include <string>

#include "search.hpp"

namespace designcount {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kMaxStsOrder = 15;
constexpr int kMaxFactorizationOrder = 12;
constexpr int kMaxLatinOrder = 12;

std::vector<int> resolve_priority(int n, const std::vector<int>& priority) {
  if (priority.empty()) {
    std::vector<int> id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 1);
    return id;
  }
  std::vector<int> sorted = priority;
  std::sort(sorted.begin(), sorted.end());
  for (int r = 0; r < n; ++r)
    if (sorted.size() != static_cast<std::size_t>(n) || sorted[r] != r + 1)
      throw Error(ErrorCode::BadInput, "vertex_priority must be a permutation of 1..n");
  return priority;
}

// ---------------------------------------------------------------------------
// Steiner triple systems: cover the least uncovered pair {a, b} by some c.

struct StsEngine {
  struct State {
    std::array<std::uint32_t, kMaxStsOrder> covered{};
    std::array<std::array<std::uint8_t, 3>, kMaxStsOrder * (kMaxStsOrder - 1) / 6> path{};
    std::uint8_t len = 0;
  };

  int n;
  std::uint32_t mask;
  int target;

  explicit StsEngine(int order)
      : n(order), mask(static_cast<std::uint32_t>((1ULL << order) - 1)), target(order * (order - 1) / 6) {}

  State root() const { return {}; }
  bool is_leaf(const State& s) const { return s.len == target; }

  template <typename F>
  void for_each_child(const State& s, F&& emit) const {
    int a = 0;
    while (a < n && (s.covered[a] | (1U << a)) == mask) ++a;
    if (a == n) return;
    const std::uint32_t open_a = mask & ~s.covered[a] & ~(1U << a);
    const int b = std::countr_zero(open_a);
    std::uint32_t cand = open_a & ~s.covered[b] & ~(1U << b);
    while (cand) {
      const int c = std::countr_zero(cand);
      cand &= cand - 1;
      State child = s;
      child.covered[a] |= (1U << b) | (1U << c);
      child.covered[b] |= (1U << a) | (1U << c);
      child.covered[c] |= (1U << a) | (1U << b);
      child.path[child.len++] = {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                                 static_cast<std::uint8_t>(c)};
      emit(child);
    }
  }
};

// ---------------------------------------------------------------------------
// 1-factorizations: color the least uncolored edge {a, b}.

struct FactorizationEngine {
  struct State {
    std::array<std::uint16_t, kMaxFactorizationOrder> used{};  // colors at v
    std::array<std::uint16_t, kMaxFactorizationOrder> adj{};   // colored neighbors of v
    std::array<std::array<std::uint8_t, 3>, kMaxFactorizationOrder * (kMaxFactorizationOrder - 1) / 2> path{};
    std::uint8_t len = 0;
  };

  int n;
  bool normalized;
  std::uint16_t vertex_mask;
  std::uint16_t color_mask;
  int target;

  FactorizationEngine(int order, bool normalize)
      : n(order),
        normalized(normalize),
        vertex_mask(static_cast<std::uint16_t>((1U << order) - 1)),
        color_mask(static_cast<std::uint16_t>((1U << (order - 1)) - 1)),
        target(order * (order - 1) / 2) {}

  static void paint(State& s, int a, int b, int c) {
    s.used[a] |= static_cast<std::uint16_t>(1U << c);
    s.used[b] |= static_cast<std::uint16_t>(1U << c);
    s.adj[a] |= static_cast<std::uint16_t>(1U << b);
    s.adj[b] |= static_cast<std::uint16_t>(1U << a);
    s.path[s.len++] = {static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c)};
  }

  State root() const {
    State s;
    if (normalized)
      for (int v = 1; v < n; ++v) paint(s, 0, v, v - 1);
    return s;
  }

  bool is_leaf(const State& s) const { return s.len == target; }

  template <typename F>
  void for_each_child(const State& s, F&& emit) const {
    int a = 0;
    while (a < n && (s.adj[a] | (1U << a)) == vertex_mask) ++a;
    if (a == n) return;
    const int b = std::countr_zero(static_cast<std::uint32_t>(vertex_mask & ~s.adj[a] & ~(1U << a)));
    std::uint32_t cand = color_mask & ~s.used[a] & ~s.used[b];
    while (cand) {
      const int c = std::countr_zero(cand);
      cand &= cand - 1;
      State child = s;
      paint(child, a, b, c);
      emit(child);
    }
  }
};

// ---------------------------------------------------------------------------
// Latin squares: fill cells in row-major order.

struct LatinEngine {
  struct State {
    std::array<std::uint16_t, kMaxLatinOrder> row_used{};
    std::array<std::uint16_t, kMaxLatinOrder> col_used{};
    std::array<std::uint8_t, kMaxLatinOrder * kMaxLatinOrder> cells{};
    std::uint8_t len = 0;
  };

  int n;
  bool fix_first_row;
  std::uint16_t mask;

  LatinEngine(int order, bool fix_first)
      : n(order), fix_first_row(fix_first), mask(static_cast<std::uint16_t>((1U << order) - 1)) {}

  static void place(State& s, int n, int symbol) {
    const int r = s.len / n;
    const int c = s.len % n;
    s.row_used[r] |= static_cast<std::uint16_t>(1U << symbol);
    s.col_used[c] |= static_cast<std::uint16_t>(1U << symbol);
    s.cells[s.len++] = static_cast<std::uint8_t>(symbol);
  }

  State root() const {
    State s;
    if (fix_first_row)
      for (int c = 0; c < n; ++c) place(s, n, c);
    return s;
  }

  bool is_leaf(const State& s) const { return s.len == n * n; }

  template <typename F>
  void for_each_child(const State& s, F&& emit) const {
    const int r = s.len / n;
    const int c = s.len % n;
    std::uint32_t cand = mask & ~s.row_used[r] & ~s.col_used[c];
    while (cand) {
      const int sym = std::countr_zero(cand);
      cand &= cand - 1;
      State child = s;
      place(child, n, sym);
      emit(child);
    }
  }
};

template <typename Engine>
detail::SearchOutcome<typename Engine::State> search(const Engine& engine, const SearchConfig& config,
                                                     int default_depth, bool collect) {
  detail::Searcher<Engine> searcher(engine, config.jobs, config.node_budget, collect);
  return searcher.run(config.split_depth.value_or(default_depth));
}

void check_range(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi)
    throw Error(ErrorCode::BadInput, std::string(what) + " order must lie in " + std::to_string(lo) + ".." +
                                         std::to_string(hi) + ", got " + std::to_string(n));
}

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TripleSystem materialize(const StsEngine::State& s, const std::vector<int>& label, int n) {
  std::vector<Triple> triples;
  triples.reserve(s.len);
  for (int t = 0; t < s.len; ++t)
    triples.push_back({label[s.path[t][0]], label[s.path[t][1]], label[s.path[t][2]]});
  return validate_triple_system(n, triples);
}

EdgeColoring materialize(const FactorizationEngine::State& s, const std::vector<int>& label, int n) {
  std::vector<ColoredEdge> edges;
  edges.reserve(s.len);
  for (int t = 0; t < s.len; ++t) {
    const int u = label[s.path[t][0]];
    const int v = label[s.path[t][1]];
    edges.push_back({std::min(u, v), std::max(u, v), s.path[t][2] + 1});
  }
  return validate_edge_coloring(n, edges);
}

}  // namespace

CountResult count_triple_systems(int n, const SearchConfig& config) {
  check_range(n, 1, kMaxStsOrder, "triple system");
  resolve_priority(n, config.vertex_priority);
  const auto start = Clock::now();
  CountResult result;
  result.kind = DesignKind::Steiner;
  result.n = n;
  if (!sts_feasible(n)) return result;
  const StsEngine engine(n);
  auto outcome = search(engine, config, (n - 1) / 2, false);
  result.count = outcome.leaves;
  result.nodes = outcome.nodes;
  result.complete = outcome.complete;
  result.seconds = since(start);
  return result;
}

CountResult count_one_factorizations(int n, bool labeled, const SearchConfig& config) {
  check_range(n, 1, kMaxFactorizationOrder, "factorization");
  resolve_priority(n, config.vertex_priority);
  const auto start = Clock::now();
  CountResult result;
  result.kind = DesignKind::OneFactorization;
  result.n = n;
  result.labeled = labeled;
  if (!one_factorization_feasible(n)) return result;
  // Coloring {1, v} with v - 1 picks one labeling per unordered factorization.
  const FactorizationEngine engine(n, true);
  auto outcome = search(engine, config, n - 2, false);
  result.count = outcome.leaves;
  if (labeled) result.count *= factorial(static_cast<unsigned>(n - 1));
  result.nodes = outcome.nodes;
  result.complete = outcome.complete;
  result.seconds = since(start);
  return result;
}

CountResult count_latin_squares(int n, const SearchConfig& config) {
  check_range(n, 1, kMaxLatinOrder, "Latin square");
  const auto start = Clock::now();
  CountResult result;
  result.kind = DesignKind::Latin;
  result.n = n;
  // Relabeling symbols maps every square to exactly one with first row 1..n.
  const LatinEngine engine(n, true);
  auto outcome = search(engine, config, n, false);
  result.count = outcome.leaves * factorial(static_cast<unsigned>(n));
  result.nodes = outcome.nodes;
  result.complete = outcome.complete;
  result.seconds = since(start);
  return result;
}

Pool<TripleSystem> enumerate_triple_systems(int n, const SearchConfig& config) {
  check_range(n, 1, kMaxStsOrder, "triple system");
  if (n > kMaxStsPoolOrder)
    throw Error(ErrorCode::PoolTooLarge, "triple system pools are limited to n <= " + std::to_string(kMaxStsPoolOrder));
  const auto label = resolve_priority(n, config.vertex_priority);
  Pool<TripleSystem> pool;
  pool.n = n;
  if (!sts_feasible(n)) return pool;
  const StsEngine engine(n);
  auto outcome = search(engine, config, (n - 1) / 2, true);
  pool.complete = outcome.complete;
  pool.items.reserve(outcome.collected.size());
  for (const auto& s : outcome.collected) pool.items.push_back(materialize(s, label, n));
  return pool;
}

Pool<EdgeColoring> enumerate_one_factorizations(int n, bool labeled, const SearchConfig& config) {
  check_range(n, 1, kMaxFactorizationOrder, "factorization");
  const int limit = labeled ? kMaxLabeledPoolOrder : kMaxNormalizedPoolOrder;
  if (n > limit)
    throw Error(ErrorCode::PoolTooLarge, std::string(labeled ? "labeled" : "unordered") +
                                             " factorization pools are limited to n <= " + std::to_string(limit));
  const auto label = resolve_priority(n, config.vertex_priority);
  Pool<EdgeColoring> pool;
  pool.n = n;
  if (!one_factorization_feasible(n)) return pool;
  const FactorizationEngine engine(n, !labeled);
  auto outcome = search(engine, config, labeled ? n - 1 : n - 2, true);
  pool.complete = outcome.complete;
  pool.items.reserve(outcome.collected.size());
  for (const auto& s : outcome.collected) pool.items.push_back(materialize(s, label, n));
  return pool;
}

Pool<LatinSquare> enumerate_latin_squares(int n, const SearchConfig& config) {
  check_range(n, 1, kMaxLatinOrder, "Latin square");
  if (n > kMaxLatinPoolOrder)
    throw Error(ErrorCode::PoolTooLarge, "Latin square pools are limited to n <= " + std::to_string(kMaxLatinPoolOrder));
  Pool<LatinSquare> pool;
  pool.n = n;
  const LatinEngine engine(n, false);
  auto outcome = search(engine, config, n, true);
  pool.complete = outcome.complete;
  pool.items.reserve(outcome.collected.size());
  for (const auto& s : outcome.collected) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
    for (int k = 0; k < n * n; ++k) rows[k / n].push_back(s.cells[k] + 1);
    pool.items.push_back(make_latin_square(rows));
  }
  return pool;
}

std::vector<std::size_t> sample_indices(std::size_t pool_size, std::uint64_t seed, std::size_t count) {
  if (pool_size == 0) throw Error(ErrorCode::EmptyPool, "cannot sample from an empty pool");
  Rng rng(seed);
  std::vector<std::size_t> out(count);
  for (auto& idx : out) idx = static_cast<std::size_t>(rng.below(pool_size));
  return out;
}

}  // namespace designcount
