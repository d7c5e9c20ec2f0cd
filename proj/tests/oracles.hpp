#pragma once

// Reference counters written independently of the library's search engine.
// They are deliberately simple and slow; tests compare the engine to them.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

// Algorithm X over pairs (columns) and triples (rows), branching on the
// column with the fewest live rows.
inline std::uint64_t count_sts(int n) {
  std::vector<std::array<int, 3>> triples;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c) triples.push_back({a, b, c});
  auto pair_id = [n](int a, int b) { return (a - 1) * n + (b - 1); };
  std::vector<std::vector<int>> rows_of(static_cast<std::size_t>(n * n));
  for (std::size_t t = 0; t < triples.size(); ++t) {
    const auto& [a, b, c] = triples[t];
    for (int id : {pair_id(a, b), pair_id(a, c), pair_id(b, c)}) rows_of[static_cast<std::size_t>(id)].push_back(static_cast<int>(t));
  }
  std::vector<int> columns;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) columns.push_back(pair_id(a, b));
  std::vector<bool> covered(static_cast<std::size_t>(n * n), false);
  std::function<std::uint64_t()> solve = [&]() -> std::uint64_t {
    int best = -1;
    std::size_t best_live = SIZE_MAX;
    for (int col : columns) {
      if (covered[static_cast<std::size_t>(col)]) continue;
      std::size_t live = 0;
      for (int t : rows_of[static_cast<std::size_t>(col)]) {
        const auto& [a, b, c] = triples[static_cast<std::size_t>(t)];
        if (!covered[static_cast<std::size_t>(pair_id(a, b))] && !covered[static_cast<std::size_t>(pair_id(a, c))] &&
            !covered[static_cast<std::size_t>(pair_id(b, c))])
          ++live;
      }
      if (live < best_live) {
        best_live = live;
        best = col;
      }
    }
    if (best < 0) return 1;
    if (best_live == 0) return 0;
    std::uint64_t total = 0;
    for (int t : rows_of[static_cast<std::size_t>(best)]) {
      const auto& [a, b, c] = triples[static_cast<std::size_t>(t)];
      const std::array<int, 3> ids{pair_id(a, b), pair_id(a, c), pair_id(b, c)};
      if (std::any_of(ids.begin(), ids.end(), [&](int id) { return covered[static_cast<std::size_t>(id)]; })) continue;
      for (int id : ids) covered[static_cast<std::size_t>(id)] = true;
      total += solve();
      for (int id : ids) covered[static_cast<std::size_t>(id)] = false;
    }
    return total;
  };
  return solve();
}

// Every perfect matching of K_n as a list of pairs (a, b), a < b.
inline std::vector<std::vector<std::pair<int, int>>> perfect_matchings(int n) {
  std::vector<std::vector<std::pair<int, int>>> out;
  std::vector<std::pair<int, int>> current;
  std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
  std::function<void()> rec = [&] {
    int a = 1;
    while (a <= n && used[static_cast<std::size_t>(a)]) ++a;
    if (a > n) {
      out.push_back(current);
      return;
    }
    used[static_cast<std::size_t>(a)] = true;
    for (int b = a + 1; b <= n; ++b) {
      if (used[static_cast<std::size_t>(b)]) continue;
      used[static_cast<std::size_t>(b)] = true;
      current.emplace_back(a, b);
      rec();
      current.pop_back();
      used[static_cast<std::size_t>(b)] = false;
    }
    used[static_cast<std::size_t>(a)] = false;
  };
  rec();
  return out;
}

// Labeled: ordered sequences of n-1 pairwise edge-disjoint perfect matchings
// (color c is the c-th matching). Unordered: increasing index sequences.
inline std::uint64_t count_one_factorizations(int n, bool labeled) {
  if (n % 2 != 0) return 0;
  const auto matchings = perfect_matchings(n);
  std::vector<std::vector<int>> edges;
  for (const auto& m : matchings) {
    std::vector<int> ids;
    for (const auto& [a, b] : m) ids.push_back(a * (n + 1) + b);
    edges.push_back(ids);
  }
  std::vector<bool> used(static_cast<std::size_t>((n + 1) * (n + 1)), false);
  std::function<std::uint64_t(int, std::size_t)> rec = [&](int depth, std::size_t start) -> std::uint64_t {
    if (depth == n - 1) return 1;
    std::uint64_t total = 0;
    for (std::size_t k = labeled ? 0 : start; k < edges.size(); ++k) {
      const auto& ids = edges[k];
      if (std::any_of(ids.begin(), ids.end(), [&](int id) { return used[static_cast<std::size_t>(id)]; })) continue;
      for (int id : ids) used[static_cast<std::size_t>(id)] = true;
      total += rec(depth + 1, k + 1);
      for (int id : ids) used[static_cast<std::size_t>(id)] = false;
    }
    return total;
  };
  return rec(0, 0);
}

// All (n-1)^{n(n-1)/2} colorings, keeping the proper ones. Tiny n only.
inline std::uint64_t count_colorings_brute(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) edges.emplace_back(a, b);
  const int colors = n - 1;
  std::vector<int> assign(edges.size(), 0);
  std::uint64_t hits = 0;
  for (;;) {
    bool ok = true;
    for (std::size_t x = 0; x < edges.size() && ok; ++x)
      for (std::size_t y = x + 1; y < edges.size() && ok; ++y) {
        const bool share = edges[x].first == edges[y].first || edges[x].first == edges[y].second ||
                           edges[x].second == edges[y].first || edges[x].second == edges[y].second;
        if (share && assign[x] == assign[y]) ok = false;
      }
    if (ok) ++hits;
    std::size_t pos = 0;
    while (pos < assign.size() && ++assign[pos] == colors) assign[pos++] = 0;
    if (pos == assign.size()) break;
  }
  return hits;
}

// Every n x n array over 1..n, keeping the Latin ones. n <= 3.
inline std::uint64_t count_latin_brute(int n) {
  const int cells = n * n;
  std::vector<int> a(static_cast<std::size_t>(cells), 0);
  std::uint64_t hits = 0;
  for (;;) {
    bool ok = true;
    for (int r = 0; r < n && ok; ++r)
      for (int c1 = 0; c1 < n && ok; ++c1)
        for (int c2 = c1 + 1; c2 < n && ok; ++c2)
          if (a[static_cast<std::size_t>(r * n + c1)] == a[static_cast<std::size_t>(r * n + c2)] ||
              a[static_cast<std::size_t>(c1 * n + r)] == a[static_cast<std::size_t>(c2 * n + r)])
            ok = false;
    if (ok) ++hits;
    int pos = 0;
    while (pos < cells && ++a[static_cast<std::size_t>(pos)] == n) a[static_cast<std::size_t>(pos++)] = 0;
    if (pos == cells) break;
  }
  return hits;
}

// Rows chosen from the n! permutations, each compatible with all earlier rows.
inline std::uint64_t count_latin_rows(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<bool>> column_used(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n), false));
  std::function<std::uint64_t(int)> rec = [&](int row) -> std::uint64_t {
    if (row == n) return 1;
    std::uint64_t total = 0;
    for (const auto& perm : perms) {
      bool ok = true;
      for (int c = 0; c < n && ok; ++c) ok = !column_used[static_cast<std::size_t>(c)][static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])];
      if (!ok) continue;
      for (int c = 0; c < n; ++c) column_used[static_cast<std::size_t>(c)][static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])] = true;
      total += rec(row + 1);
      for (int c = 0; c < n; ++c) column_used[static_cast<std::size_t>(c)][static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])] = false;
    }
    return total;
  };
  return rec(0);
}

}  // namespace oracle
