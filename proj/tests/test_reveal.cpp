#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "designcount/entropy_lab.hpp"
#include "designcount/enumeration.hpp"
#include "designcount/errors.hpp"

using namespace designcount;

namespace {

const std::vector<Triple> kFano = {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {2, 4, 6}, {2, 5, 7}, {3, 4, 7}, {3, 5, 6}};

EdgeColoring k4() {
  const std::vector<ColoredEdge> e = {{1, 2, 1}, {3, 4, 1}, {1, 3, 2}, {2, 4, 2}, {1, 4, 3}, {2, 3, 3}};
  return validate_edge_coloring(4, e);
}

using Set = std::vector<int>;

struct Expected {
  Set a, m, b, n;
};

// Straight from the definitions, using only the edge order -<.
Expected oracle_1f(const EdgeColoring& x, const RevealOrder& o, int i, int j) {
  Expected e;
  std::set<int> a, b;
  for (int t = 1; t <= x.order(); ++t)
    if (t != i && t != j && o.precedes(t, i)) {
      a.insert(x.color(t, i));
      a.insert(x.color(t, j));
    }
  for (int k = 1; k <= x.order(); ++k)
    if (k != i && o.precedes(i, k) && o.edge_precedes(Edge::of(i, k), Edge::of(i, j))) b.insert(x.color(i, k));
  for (int c = 1; c < x.order(); ++c) {
    if (!a.count(c)) e.m.push_back(c);
    if (!a.count(c) && !b.count(c)) e.n.push_back(c);
  }
  e.a.assign(a.begin(), a.end());
  e.b.assign(b.begin(), b.end());
  return e;
}

Expected oracle_sts(const TripleSystem& x, const RevealOrder& o, int i, int j) {
  Expected e;
  for (int t = 1; t <= x.order(); ++t) {
    if (t == i || t == j) continue;
    const bool ruled = o.precedes(t, i) || o.precedes(x.third(i, t), i) || o.precedes(x.third(j, t), i);
    (ruled ? e.a : e.m).push_back(t);
  }
  for (int t : e.m) {
    const bool late = o.edge_precedes(Edge::of(i, t), Edge::of(i, j)) ||
                      o.edge_precedes(Edge::of(i, x.third(i, t)), Edge::of(i, j));
    (late ? e.b : e.n).push_back(t);
  }
  return e;
}

}  // namespace

TEST_CASE("reveal orders") {
  const auto o = RevealOrder::with_sorted_stars({3, 1, 2});
  CHECK(o.position(3) == 1);
  CHECK(o.precedes(1, 2));
  CHECK(o.star(3).size() == 2);
  CHECK(o.star(2).empty());
  CHECK(o.edge_sequence() == std::vector<Edge>{{1, 3}, {2, 3}, {1, 2}});
  CHECK(o.edge_precedes(Edge::of(2, 3), Edge::of(1, 2)));
  CHECK(o.star_rank(1, 3) == 0);

  const auto two = RevealOrder::with_sorted_stars({2, 1});
  CHECK(two.star(2).size() == 1);
  CHECK(two.edge_sequence() == std::vector<Edge>{{1, 2}});

  CHECK_THROWS_AS(RevealOrder::with_sorted_stars({1, 1, 2}), Error);
  auto bad = RevealOrder::with_sorted_stars({1, 2, 3});
  const std::vector<int> wrong = {2};
  CHECK_THROWS_AS(bad.set_star(1, wrong), Error);
  const std::vector<int> swapped = {3, 2};
  bad.set_star(1, swapped);
  CHECK(bad.star_rank(1, 3) == 1);
  CHECK(bad.star_rank(1, 2) == 2);
  CHECK(bad.star_rank(2, 1) == 0);
}

TEST_CASE("sampled orders are reproducible and uniform") {
  CHECK(sample_reveal_order(6, 99).edge_sequence() == sample_reveal_order(6, 99).edge_sequence());
  Rng rng(7);
  std::vector<int> first(5, 0);
  const int samples = 100000;
  for (int s = 0; s < samples; ++s) ++first[static_cast<std::size_t>(sample_reveal_order(4, rng).vertex_order()[0])];
  const double sigma = std::sqrt(samples * 0.25 * 0.75);
  for (int v = 1; v <= 4; ++v) CHECK(std::fabs(first[static_cast<std::size_t>(v)] - samples / 4.0) <= 5 * sigma);
}

TEST_CASE("vertex order enumeration") {
  CHECK(enumerate_vertex_orders(3).size() == 6);
  const auto six = enumerate_vertex_orders(6);
  CHECK(six.size() == 720);
  CHECK(std::set<std::vector<int>>(six.begin(), six.end()).size() == 720);
  CHECK_THROWS_AS(enumerate_vertex_orders(9), Error);
}

TEST_CASE("1F reveal sets by hand") {
  const auto x = k4();
  auto o = RevealOrder::with_sorted_stars({1, 2, 3, 4});
  auto s = reveal_sets_1f(x, o, 2, 3);
  CHECK(s.A == Set{1, 2});
  CHECK(s.Mset == Set{3});
  CHECK(s.B.empty());
  CHECK(s.Nset == Set{3});
  CHECK(s.M == 1);
  CHECK(s.N == 1);

  s = reveal_sets_1f(x, o, 3, 2);
  CHECK(s.trivial);
  CHECK(s.N == 1);
  CHECK(s.Nset == Set{x.color(2, 3)});

  s = reveal_sets_1f(x, o, 1, 4);
  CHECK(s.A.empty());
  CHECK(s.Mset == Set{1, 2, 3});
  CHECK(s.B == Set{1, 2});
  CHECK(s.Nset == Set{3});
  CHECK(s.M == 3);
  CHECK(s.N == 1);
  CHECK_THROWS_AS(reveal_sets_1f(x, o, 2, 2), Error);
}

TEST_CASE("STS reveal sets by hand") {
  const auto fano = validate_triple_system(7, kFano);
  const auto o = RevealOrder::with_sorted_stars({1, 2, 3, 4, 5, 6, 7});
  auto s = reveal_sets_sts(fano, o, 2, 4);
  CHECK(s.value == 6);
  CHECK_FALSE(s.trivial);
  CHECK(f_event(fano, o, 2, 4));
  CHECK(s.A == Set{1, 3, 5});
  CHECK(s.Mset == Set{6, 7});
  CHECK(s.B.empty());
  CHECK(s.Nset == Set{6, 7});
  CHECK(s.M == 2);
  CHECK(s.N == 2);

  s = reveal_sets_sts(fano, o, 4, 2);
  CHECK(s.trivial);
  CHECK(s.N == 1);
}

TEST_CASE("reveal sets agree with the definitions on random orders") {
  const auto colorings = enumerate_one_factorizations(6, true).items;
  const auto systems = enumerate_triple_systems(9).items;
  Rng rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const auto& x = colorings[rng.below(colorings.size())];
    const auto o = sample_reveal_order(6, rng);
    for (int i = 1; i <= 6; ++i)
      for (int j = 1; j <= 6; ++j) {
        if (i == j) continue;
        const auto s = reveal_sets_1f(x, o, i, j);
        if (o.precedes(j, i)) {
          CHECK(s.trivial);
          continue;
        }
        const auto e = oracle_1f(x, o, i, j);
        CHECK(s.A == e.a);
        CHECK(s.Mset == e.m);
        CHECK(s.B == e.b);
        CHECK(s.Nset == e.n);
        // Containment and the true value stays available.
        CHECK(std::includes(s.Mset.begin(), s.Mset.end(), s.Nset.begin(), s.Nset.end()));
        CHECK(std::binary_search(s.Nset.begin(), s.Nset.end(), x.color(i, j)));
      }

    const auto& y = systems[rng.below(systems.size())];
    const auto p = sample_reveal_order(9, rng);
    for (int i = 1; i <= 9; ++i)
      for (int j = 1; j <= 9; ++j) {
        if (i == j) continue;
        const auto s = reveal_sets_sts(y, p, i, j);
        CHECK(s.trivial == !f_event(y, p, i, j));
        if (s.trivial) continue;
        const auto e = oracle_sts(y, p, i, j);
        CHECK(s.A == e.a);
        CHECK(s.Mset == e.m);
        CHECK(s.B == e.b);
        CHECK(s.Nset == e.n);
        CHECK(std::binary_search(s.Nset.begin(), s.Nset.end(), y.third(i, j)));
      }
  }
}

TEST_CASE("M does not depend on star orders") {
  const auto x = enumerate_one_factorizations(6, true).items[17];
  const auto y = enumerate_triple_systems(7).items[4];
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto o = sample_reveal_order(6, rng);
    const int i = o.vertex_order()[1];
    const int j = o.vertex_order()[4];
    const int m = reveal_sets_1f(x, o, i, j).M;
    std::vector<int> star(o.star(i).begin(), o.star(i).end());
    rng.shuffle(std::span<int>(star));
    o.set_star(i, star);
    CHECK(reveal_sets_1f(x, o, i, j).M == m);

    auto p = sample_reveal_order(7, rng);
    const int a = p.vertex_order()[0];
    const int b = p.vertex_order()[3];
    const int k = y.third(a, b);
    std::vector<int> sa(p.star(a).begin(), p.star(a).end());
    // Put {a,b} ahead of {a,k} so F holds, then compare M across shuffles.
    std::stable_partition(sa.begin(), sa.end(), [&](int u) { return u == b; });
    p.set_star(a, sa);
    if (!p.precedes(a, k)) continue;
    const int before = reveal_sets_sts(y, p, a, b).M;
    rng.shuffle(std::span<int>(sa).subspan(1));
    p.set_star(a, sa);
    CHECK(reveal_sets_sts(y, p, a, b).M == before);
  }
}

TEST_CASE("F holds with probability 1/6") {
  const auto fano = validate_triple_system(7, kFano);
  const auto f = estimate_f_probability(fano, 2, 4, 100000, 3);
  const double sigma = std::sqrt(1.0 / 6 * 5.0 / 6 / 100000);
  CHECK(std::fabs(f.estimate - 1.0 / 6) <= 5 * sigma);
  CHECK(estimate_f_probability(fano, 2, 4, 100000, 3, 4).estimate == f.estimate);
}
