#include <algorithm>
#include <numeric>
#include <string>

#include "designcount/entropy_lab.hpp"
#include "designcount/errors.hpp"
#include "reveal_core.hpp"

namespace designcount {

std::string_view variant_name(Variant v) { return v == Variant::OneFactorization ? "1f" : "sts"; }

Variant parse_variant(std::string_view name) {
  if (name == "1f") return Variant::OneFactorization;
  if (name == "sts") return Variant::Steiner;
  throw Error(ErrorCode::BadInput, "unknown variant '" + std::string(name) + "'");
}

RevealOrder::RevealOrder(std::vector<int> vertex_order, std::vector<std::vector<int>> stars)
    : n_(static_cast<int>(vertex_order.size())), vertex_order_(std::move(vertex_order)), stars_(std::move(stars)) {
  if (n_ < 1) throw Error(ErrorCode::BadInput, "a reveal order needs at least one vertex");
  pos_.assign(static_cast<std::size_t>(n_ + 1), 0);
  for (int k = 0; k < n_; ++k) {
    const int v = vertex_order_[static_cast<std::size_t>(k)];
    if (v < 1 || v > n_ || pos_[static_cast<std::size_t>(v)] != 0)
      throw Error(ErrorCode::BadOrder, "vertex order is not a permutation of 1..n");
    pos_[static_cast<std::size_t>(v)] = k + 1;
  }
  if (stars_.size() != static_cast<std::size_t>(n_ + 1))
    throw Error(ErrorCode::BadOrder, "need one star order per vertex (index 1..n)");
  rank_.assign(static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(n_ + 1), 0);
  for (int v = 1; v <= n_; ++v) set_star(v, std::vector<int>(stars_[static_cast<std::size_t>(v)]));
}

RevealOrder RevealOrder::with_sorted_stars(std::vector<int> vertex_order) {
  const int n = static_cast<int>(vertex_order.size());
  std::vector<int> pos(static_cast<std::size_t>(n + 1), 0);
  for (int k = 0; k < n; ++k) {
    const int v = vertex_order[static_cast<std::size_t>(k)];
    if (v < 1 || v > n) throw Error(ErrorCode::BadOrder, "vertex order is not a permutation of 1..n");
    pos[static_cast<std::size_t>(v)] = k + 1;
  }
  std::vector<std::vector<int>> stars(static_cast<std::size_t>(n + 1));
  for (int v = 1; v <= n; ++v)
    for (int u = 1; u <= n; ++u)
      if (pos[static_cast<std::size_t>(v)] < pos[static_cast<std::size_t>(u)]) stars[static_cast<std::size_t>(v)].push_back(u);
  return RevealOrder(std::move(vertex_order), std::move(stars));
}

void RevealOrder::set_star(int v, std::span<const int> partners) {
  if (v < 1 || v > n_) throw Error(ErrorCode::BadVertex, "vertex " + std::to_string(v));
  const auto expected = static_cast<std::size_t>(n_ - position(v));
  if (partners.size() != expected)
    throw Error(ErrorCode::BadOrder, "star of " + std::to_string(v) + " must list every later vertex once");
  for (int u = 1; u <= n_; ++u) rank_[index(v, u)] = 0;
  std::vector<int> copy(partners.begin(), partners.end());
  for (std::size_t r = 0; r < copy.size(); ++r) {
    const int u = copy[r];
    if (u < 1 || u > n_ || position(u) <= position(v) || rank_[index(v, u)] != 0)
      throw Error(ErrorCode::BadOrder, "star of " + std::to_string(v) + " must list every later vertex once");
    rank_[index(v, u)] = static_cast<int>(r) + 1;
  }
  stars_[static_cast<std::size_t>(v)] = std::move(copy);
}

Edge RevealOrder::oriented(Edge e) const { return precedes(e.u, e.v) ? e : Edge{e.v, e.u}; }

bool RevealOrder::edge_precedes(Edge e, Edge f) const {
  const Edge a = oriented(e);
  const Edge b = oriented(f);
  if (a.u != b.u) return precedes(a.u, b.u);
  return star_rank(a.u, a.v) < star_rank(b.u, b.v);
}

std::vector<Edge> RevealOrder::edge_sequence() const {
  std::vector<Edge> out;
  for (int v : vertex_order_)
    for (int u : star(v)) out.push_back(Edge::of(v, u));
  return out;
}

RevealOrder sample_reveal_order(int n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::BadInput, "n must be positive");
  std::vector<int> vertices(static_cast<std::size_t>(n));
  std::iota(vertices.begin(), vertices.end(), 1);
  rng.shuffle(std::span<int>(vertices));
  RevealOrder order = RevealOrder::with_sorted_stars(vertices);
  for (int v : vertices) {
    std::vector<int> star(order.star(v).begin(), order.star(v).end());
    rng.shuffle(std::span<int>(star));
    order.set_star(v, star);
  }
  return order;
}

RevealOrder sample_reveal_order(int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_reveal_order(n, rng);
}

std::vector<std::vector<int>> enumerate_vertex_orders(int n) {
  if (n < 1) throw Error(ErrorCode::BadInput, "n must be positive");
  if (n > kMaxEnumerableOrder)
    throw Error(ErrorCode::TooLarge, std::to_string(n) + "! vertex orders exceed the enumeration limit");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

std::vector<int> members(std::uint32_t mask) {
  std::vector<int> out;
  for (int v = 0; v < 32; ++v)
    if (mask & (1U << v)) out.push_back(v);
  return out;
}

RevealSets assemble(Variant variant, const RevealOrder& order, int i, int j, const detail::Availability& av) {
  RevealSets s;
  s.variant = variant;
  s.i = i;
  s.j = j;
  s.value = av.value;
  s.trivial = av.trivial;
  s.A = members(av.a);
  s.B = members(av.b);
  s.Mset = members(av.m);
  s.Nset = members(av.n);
  s.M = static_cast<int>(s.Mset.size());
  s.N = static_cast<int>(s.Nset.size());
  s.p = order.position(i);
  s.m = order.order() - s.p;
  s.q = order.precedes(i, j) ? order.star_rank(i, j) : 0;
  return s;
}

void check_pair(int n, int i, int j) {
  if (i < 1 || i > n || j < 1 || j > n) throw Error(ErrorCode::BadVertex, "pair outside 1..n");
  if (i == j) throw Error(ErrorCode::SameVertex, "i and j must differ");
}

}  // namespace

RevealSets reveal_sets_1f(const EdgeColoring& x, const RevealOrder& order, int i, int j) {
  if (x.order() != order.order()) throw Error(ErrorCode::BadInput, "order size differs from the coloring");
  check_pair(x.order(), i, j);
  return assemble(Variant::OneFactorization, order, i, j, detail::availability_1f(x, order, i, j));
}

RevealSets reveal_sets_sts(const TripleSystem& x, const RevealOrder& order, int i, int j) {
  if (x.order() != order.order()) throw Error(ErrorCode::BadInput, "order size differs from the triple system");
  check_pair(x.order(), i, j);
  return assemble(Variant::Steiner, order, i, j, detail::availability_sts(x, order, i, j));
}

bool f_event(const TripleSystem& x, const RevealOrder& order, int i, int j) {
  check_pair(x.order(), i, j);
  return detail::f_event_fast(x, order, i, j);
}

}  // namespace designcount
